#include "cubic/wire.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <tuple>

#include "cubic/numtheory.hpp"
#include "cubic/rank_coding.hpp"
#include "cubic/rng.hpp"

namespace cubic {

// --- Frame codec ---

bool is_known_type(uint8_t type) {
    switch (type) {
        case msg_type::kPubKey:
        case msg_type::kCipherRanked:
        case msg_type::kAckRank:
        case msg_type::kOkxMsg:
        case msg_type::kParams:
        case msg_type::kError:
            return true;
        default:
            return false;
    }
}

std::vector<uint8_t> encode_frame(const Frame& frame) {
    if (!is_known_type(frame.type))
        throw Error(Errc::UnknownType, "message type " + std::to_string(frame.type));
    if (frame.payload.size() > kMaxPayload)
        throw Error(Errc::Oversize, "payload of " + std::to_string(frame.payload.size()) + " bytes");
    std::vector<uint8_t> out;
    out.reserve(6 + frame.payload.size());
    out.push_back(kFrameMagic);
    out.push_back(frame.type);
    const uint32_t len = static_cast<uint32_t>(frame.payload.size());
    out.push_back(static_cast<uint8_t>(len >> 24));
    out.push_back(static_cast<uint8_t>(len >> 16));
    out.push_back(static_cast<uint8_t>(len >> 8));
    out.push_back(static_cast<uint8_t>(len));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

Frame decode_frame(std::span<const uint8_t> bytes) {
    if (bytes.size() < 6) throw Error(Errc::Truncated, "frame header needs 6 bytes");
    if (bytes[0] != kFrameMagic)
        throw Error(Errc::BadMagic, "expected 0x4B, got " + std::to_string(bytes[0]));
    const uint8_t type = bytes[1];
    if (!is_known_type(type)) throw Error(Errc::UnknownType, "message type " + std::to_string(type));
    const uint32_t len = (static_cast<uint32_t>(bytes[2]) << 24) |
                         (static_cast<uint32_t>(bytes[3]) << 16) |
                         (static_cast<uint32_t>(bytes[4]) << 8) | bytes[5];
    if (len > kMaxPayload) throw Error(Errc::Oversize, "payload of " + std::to_string(len) + " bytes");
    if (bytes.size() < 6 + static_cast<size_t>(len))
        throw Error(Errc::Truncated, "payload shorter than its declared length");
    if (bytes.size() > 6 + static_cast<size_t>(len))
        throw Error(Errc::Oversize, "trailing bytes after the frame");
    Frame frame;
    frame.type = type;
    frame.payload.assign(bytes.begin() + 6, bytes.end());
    return frame;
}

void put_int(std::vector<uint8_t>& out, const BigInt& value) {
    const std::vector<uint8_t> bytes = value.to_bytes_be();
    if (bytes.size() > 0xFFFF) throw Error(Errc::Oversize, "integer wider than 65535 bytes");
    out.push_back(static_cast<uint8_t>(bytes.size() >> 8));
    out.push_back(static_cast<uint8_t>(bytes.size()));
    out.insert(out.end(), bytes.begin(), bytes.end());
}

BigInt get_int(std::span<const uint8_t> buf, size_t& pos) {
    if (pos + 2 > buf.size()) throw Error(Errc::Truncated, "integer length prefix");
    const size_t len = (static_cast<size_t>(buf[pos]) << 8) | buf[pos + 1];
    pos += 2;
    if (pos + len > buf.size()) throw Error(Errc::Truncated, "integer body");
    const BigInt value = BigInt::from_bytes_be(buf.subspan(pos, len));
    pos += len;
    return value;
}

namespace {

void expect_consumed(const Frame& frame, size_t pos) {
    if (pos != frame.payload.size())
        throw Error(Errc::Oversize, "trailing bytes in payload of type " + std::to_string(frame.type));
}

void expect_type(const Frame& frame, uint8_t type) {
    if (frame.type != type)
        throw Error(Errc::UnknownType, "expected type " + std::to_string(type) + ", got " +
                                           std::to_string(frame.type));
}

}  // namespace

Frame make_pubkey_frame(const CubicPublicKey& pub) {
    Frame frame{msg_type::kPubKey, {}};
    put_int(frame.payload, pub.n);
    put_int(frame.payload, pub.alpha);
    return frame;
}

Frame make_cipher_frame(const BigInt& framed_value) {
    Frame frame{msg_type::kCipherRanked, {}};
    put_int(frame.payload, framed_value);
    return frame;
}

Frame make_ack_frame(uint32_t rank) {
    Frame frame{msg_type::kAckRank, {}};
    put_int(frame.payload, BigInt(rank));
    return frame;
}

Frame make_okx_msg_frame(const BigInt& value) {
    Frame frame{msg_type::kOkxMsg, {}};
    put_int(frame.payload, value);
    return frame;
}

Frame make_params_frame(const OkxParams& params) {
    Frame frame{msg_type::kParams, {}};
    put_int(frame.payload, params.p);
    put_int(frame.payload, params.g);
    put_int(frame.payload, params.c);
    put_int(frame.payload, BigInt(params.a));
    return frame;
}

Frame make_error_frame(const std::string& message) {
    Frame frame{msg_type::kError, {}};
    frame.payload.assign(message.begin(), message.end());
    return frame;
}

std::pair<BigInt, BigInt> parse_pubkey_frame(const Frame& frame) {
    expect_type(frame, msg_type::kPubKey);
    size_t pos = 0;
    BigInt n = get_int(frame.payload, pos);
    BigInt alpha = get_int(frame.payload, pos);
    expect_consumed(frame, pos);
    return {std::move(n), std::move(alpha)};
}

BigInt parse_cipher_frame(const Frame& frame) {
    expect_type(frame, msg_type::kCipherRanked);
    size_t pos = 0;
    BigInt v = get_int(frame.payload, pos);
    expect_consumed(frame, pos);
    return v;
}

uint32_t parse_ack_frame(const Frame& frame) {
    expect_type(frame, msg_type::kAckRank);
    size_t pos = 0;
    const BigInt v = get_int(frame.payload, pos);
    expect_consumed(frame, pos);
    if (!v.fits_u64() || v.to_u64() > UINT32_MAX)
        throw Error(Errc::BadRank, "acknowledged rank out of range");
    return static_cast<uint32_t>(v.to_u64());
}

BigInt parse_okx_msg_frame(const Frame& frame) {
    expect_type(frame, msg_type::kOkxMsg);
    size_t pos = 0;
    BigInt v = get_int(frame.payload, pos);
    expect_consumed(frame, pos);
    return v;
}

std::tuple<BigInt, BigInt, BigInt, uint32_t> parse_params_frame(const Frame& frame) {
    expect_type(frame, msg_type::kParams);
    size_t pos = 0;
    BigInt p = get_int(frame.payload, pos);
    BigInt g = get_int(frame.payload, pos);
    BigInt c = get_int(frame.payload, pos);
    const BigInt a = get_int(frame.payload, pos);
    expect_consumed(frame, pos);
    if (!a.fits_u64() || a.to_u64() < 2 || a.to_u64() > UINT32_MAX)
        throw Error(Errc::OutOfRange, "exponent in PARAMS frame out of range");
    return {std::move(p), std::move(g), std::move(c), static_cast<uint32_t>(a.to_u64())};
}

std::string parse_error_frame(const Frame& frame) {
    expect_type(frame, msg_type::kError);
    return std::string(frame.payload.begin(), frame.payload.end());
}

// --- Cubic session machines ---

CubicSender::CubicSender(BigInt message) : message_(std::move(message)) {}

std::optional<Frame> CubicSender::on_frame(const Frame& frame) {
    try {
        if (phase_ == CubicPhase::AwaitKey && frame.type == msg_type::kPubKey) {
            auto [n, alpha] = parse_pubkey_frame(frame);
            if (n < BigInt(2) || alpha <= BigInt(1) || alpha >= n ||
                mod_pow(alpha, 3, n) != BigInt(1))
                throw Error(Errc::ProtocolViolation,
                            "published alpha is not a cube root of unity mod n");
            const CubicPublicKey pub{std::move(n), std::move(alpha), 3};
            const RankedCiphertext rc = encrypt_ranked(message_, pub);
            framed_ = encode_rank3(rc.c, rc.rank);
            sent_rank_ = rc.rank;
            phase_ = CubicPhase::AwaitAck;
            return make_cipher_frame(framed_);
        }
        if (phase_ == CubicPhase::AwaitAck && frame.type == msg_type::kAckRank) {
            const uint32_t ack = parse_ack_frame(frame);
            if (ack != sent_rank_) {
                phase_ = CubicPhase::Failed;
                throw Error(Errc::AckMismatch, "acknowledged rank " + std::to_string(ack) +
                                                   ", sent " + std::to_string(sent_rank_));
            }
            phase_ = CubicPhase::Done;
            return std::nullopt;
        }
        throw Error(Errc::ProtocolViolation,
                    "frame type " + std::to_string(frame.type) + " not valid in this phase");
    } catch (...) {
        phase_ = CubicPhase::Failed;
        throw;
    }
}

CubicReceiver::CubicReceiver(CubicPrivateKey key) : key_(std::move(key)) {
    if (key_.pub.a != 3)
        throw std::invalid_argument("wire sessions use rank-3 framing; key must have a = 3");
}

Frame CubicReceiver::start() {
    if (phase_ != CubicPhase::AwaitKey) {
        phase_ = CubicPhase::Failed;
        throw Error(Errc::ProtocolViolation, "key already published");
    }
    phase_ = CubicPhase::AwaitCipher;
    return make_pubkey_frame(key_.pub);
}

std::optional<Frame> CubicReceiver::on_frame(const Frame& frame) {
    try {
        if (phase_ == CubicPhase::AwaitCipher && frame.type == msg_type::kCipherRanked) {
            const BigInt framed = parse_cipher_frame(frame);
            const auto [c, rank] = decode_rank3(framed);
            received_ = decrypt_ranked(RankedCiphertext{c, rank}, key_);
            received_rank_ = rank;
            phase_ = CubicPhase::Done;
            return make_ack_frame(rank);
        }
        throw Error(Errc::ProtocolViolation,
                    "frame type " + std::to_string(frame.type) + " not valid in this phase");
    } catch (...) {
        phase_ = CubicPhase::Failed;
        throw;
    }
}

// --- OKX session machine ---

OkxPeer OkxPeer::initiator(OkxParams params, OkxLocal local) {
    OkxPeer peer;
    peer.initiator_ = true;
    peer.params_ = std::move(params);
    peer.local_ = std::move(local);
    peer.phase_ = OkxPhase::AwaitMsg;
    return peer;
}

OkxPeer OkxPeer::responder(uint64_t seed) {
    OkxPeer peer;
    peer.initiator_ = false;
    peer.seed_ = seed;
    peer.started_ = true;  // nothing to emit; first event is the PARAMS frame
    peer.phase_ = OkxPhase::AwaitParams;
    return peer;
}

std::optional<Frame> OkxPeer::start() {
    if (!initiator_) return std::nullopt;
    if (started_ || phase_ != OkxPhase::AwaitMsg)
        throw Error(Errc::ProtocolViolation, "session already started or failed");
    started_ = true;
    return make_params_frame(*params_);
}

std::optional<Frame> OkxPeer::on_frame(const Frame& frame) {
    try {
        if (phase_ == OkxPhase::AwaitParams && frame.type == msg_type::kParams) {
            const auto [p, g, c, a] = parse_params_frame(frame);
            params_ = okx_params_for_cipher(p, g, a, c);
            SplitMix64 rng(seed_);
            local_ = random_local(*params_, rng);
            phase_ = OkxPhase::AwaitMsg;
            return make_okx_msg_frame(okx_message(*params_, *local_));
        }
        if (phase_ == OkxPhase::AwaitMsg && frame.type == msg_type::kOkxMsg) {
            if (!started_)
                throw Error(Errc::ProtocolViolation, "message before session start");
            const BigInt peer_msg = parse_okx_msg_frame(frame);
            key_ = okx_key(*params_, *local_, peer_msg);
            phase_ = OkxPhase::Done;
            if (initiator_) return make_okx_msg_frame(okx_message(*params_, *local_));
            return std::nullopt;
        }
        throw Error(Errc::ProtocolViolation,
                    "frame type " + std::to_string(frame.type) + " not valid in this phase");
    } catch (...) {
        phase_ = OkxPhase::Failed;
        throw;
    }
}

const OkxKey& OkxPeer::key() const {
    if (!key_) throw Error(Errc::ProtocolViolation, "no key derived yet");
    return *key_;
}

const OkxParams& OkxPeer::params() const {
    if (!params_) throw Error(Errc::ProtocolViolation, "params not known yet");
    return *params_;
}

const OkxLocal& OkxPeer::local() const {
    if (!local_) throw Error(Errc::ProtocolViolation, "local state not drawn yet");
    return *local_;
}

// --- In-memory transport ---

namespace {

struct PairCore {
    std::mutex mutex;
    std::condition_variable cv;
    std::deque<std::vector<uint8_t>> queue[2];
    bool closed[2] = {false, false};
};

class MemoryEndpoint final : public Endpoint {
public:
    MemoryEndpoint(std::shared_ptr<PairCore> core, int side) : core_(std::move(core)), side_(side) {}
    ~MemoryEndpoint() override { close(); }

    void send(const Frame& frame) override {
        std::vector<uint8_t> bytes = encode_frame(frame);
        std::lock_guard lock(core_->mutex);
        if (core_->closed[side_]) throw Error(Errc::ConnectionClosed, "endpoint closed");
        if (core_->closed[1 - side_]) throw Error(Errc::ConnectionClosed, "peer closed");
        core_->queue[1 - side_].push_back(std::move(bytes));
        core_->cv.notify_all();
    }

    Frame recv() override {
        std::unique_lock lock(core_->mutex);
        auto& inbox = core_->queue[side_];
        const bool ready = core_->cv.wait_for(lock, timeout_, [&] {
            return !inbox.empty() || core_->closed[side_] || core_->closed[1 - side_];
        });
        if (!inbox.empty()) {
            const std::vector<uint8_t> bytes = std::move(inbox.front());
            inbox.pop_front();
            return decode_frame(bytes);
        }
        if (ready) throw Error(Errc::ConnectionClosed, "connection closed");
        throw Error(Errc::Timeout, "no frame within the receive timeout");
    }

    void close() override {
        std::lock_guard lock(core_->mutex);
        core_->closed[side_] = true;
        core_->cv.notify_all();
    }

private:
    std::shared_ptr<PairCore> core_;
    int side_;
};

}  // namespace

std::pair<std::unique_ptr<Endpoint>, std::unique_ptr<Endpoint>> transport_pair() {
    auto core = std::make_shared<PairCore>();
    return {std::make_unique<MemoryEndpoint>(core, 0), std::make_unique<MemoryEndpoint>(core, 1)};
}

// --- TCP transport ---

namespace {

struct ParsedAddr {
    in_addr host{};
    uint16_t port = 0;
};

ParsedAddr parse_addr(const std::string& addr) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos)
        throw Error(Errc::BadAddress, "'" + addr + "' is not host:port");
    std::string host = addr.substr(0, colon);
    const std::string port_text = addr.substr(colon + 1);
    if (host.empty() || host == "localhost") host = "127.0.0.1";
    ParsedAddr out;
    if (inet_pton(AF_INET, host.c_str(), &out.host) != 1)
        throw Error(Errc::BadAddress, "'" + host + "' is not a numeric IPv4 address");
    char* end = nullptr;
    const long port = std::strtol(port_text.c_str(), &end, 10);
    if (port_text.empty() || *end != '\0' || port < 0 || port > 65535)
        throw Error(Errc::BadAddress, "'" + port_text + "' is not a port number");
    out.port = static_cast<uint16_t>(port);
    return out;
}

class TcpEndpoint final : public Endpoint {
public:
    explicit TcpEndpoint(int fd) : fd_(fd) {}
    ~TcpEndpoint() override { close(); }

    void send(const Frame& frame) override {
        const std::vector<uint8_t> bytes = encode_frame(frame);
        size_t off = 0;
        while (off < bytes.size()) {
            const ssize_t n = ::send(fd_, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(Errc::ConnectionClosed, std::strerror(errno));
            }
            off += static_cast<size_t>(n);
        }
    }

    Frame recv() override {
        std::vector<uint8_t> header(6);
        read_exact(header.data(), header.size(), /*at_boundary=*/true);
        // Validate the header before trusting the length.
        if (header[0] != kFrameMagic)
            throw Error(Errc::BadMagic, "expected 0x4B, got " + std::to_string(header[0]));
        if (!is_known_type(header[1]))
            throw Error(Errc::UnknownType, "message type " + std::to_string(header[1]));
        const uint32_t len = (static_cast<uint32_t>(header[2]) << 24) |
                             (static_cast<uint32_t>(header[3]) << 16) |
                             (static_cast<uint32_t>(header[4]) << 8) | header[5];
        if (len > kMaxPayload)
            throw Error(Errc::Oversize, "payload of " + std::to_string(len) + " bytes");
        std::vector<uint8_t> bytes = std::move(header);
        bytes.resize(6 + len);
        read_exact(bytes.data() + 6, len, /*at_boundary=*/false);
        return decode_frame(bytes);
    }

    void close() override {
        if (fd_ >= 0) {
            ::shutdown(fd_, SHUT_RDWR);
            ::close(fd_);
            fd_ = -1;
        }
    }

private:
    void read_exact(uint8_t* out, size_t want, bool at_boundary) {
        using clock = std::chrono::steady_clock;
        const auto deadline = clock::now() + timeout_;
        size_t got = 0;
        while (got < want) {
            const auto remaining =
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
            if (remaining.count() <= 0)
                throw Error(Errc::Timeout, "no frame within the receive timeout");
            pollfd pfd{fd_, POLLIN, 0};
            const int pr = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
            if (pr < 0) {
                if (errno == EINTR) continue;
                throw Error(Errc::ConnectionClosed, std::strerror(errno));
            }
            if (pr == 0) throw Error(Errc::Timeout, "no frame within the receive timeout");
            const ssize_t n = ::recv(fd_, out + got, want - got, 0);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(Errc::ConnectionClosed, std::strerror(errno));
            }
            if (n == 0) {
                if (at_boundary && got == 0)
                    throw Error(Errc::ConnectionClosed, "peer closed the connection");
                throw Error(Errc::Truncated, "connection closed mid-frame");
            }
            got += static_cast<size_t>(n);
        }
    }

    int fd_ = -1;
};

}  // namespace

TcpListener::TcpListener(const std::string& addr) {
    const ParsedAddr parsed = parse_addr(addr);
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw Error(Errc::ConnectionFailed, std::strerror(errno));
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_addr = parsed.host;
    sa.sin_port = htons(parsed.port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0 || ::listen(fd_, 1) != 0) {
        const std::string why = std::strerror(errno);
        ::close(fd_);
        fd_ = -1;
        throw Error(Errc::ConnectionFailed, "cannot listen on " + addr + ": " + why);
    }
    socklen_t len = sizeof sa;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&sa), &len);
    char host[INET_ADDRSTRLEN] = {};
    ::inet_ntop(AF_INET, &sa.sin_addr, host, sizeof host);
    host_ = host;
    port_ = ntohs(sa.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::string TcpListener::local_address() const { return host_ + ":" + std::to_string(port_); }

std::unique_ptr<Endpoint> TcpListener::accept(std::chrono::milliseconds timeout) {
    pollfd pfd{fd_, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (pr < 0) throw Error(Errc::ConnectionFailed, std::strerror(errno));
    if (pr == 0) throw Error(Errc::Timeout, "no peer connected within the accept timeout");
    const int conn = ::accept(fd_, nullptr, nullptr);
    if (conn < 0) throw Error(Errc::ConnectionFailed, std::strerror(errno));
    return std::make_unique<TcpEndpoint>(conn);
}

std::unique_ptr<Endpoint> tcp_listen(const std::string& addr) {
    TcpListener listener(addr);
    return listener.accept();
}

std::unique_ptr<Endpoint> tcp_connect(const std::string& addr) {
    const ParsedAddr parsed = parse_addr(addr);
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw Error(Errc::ConnectionFailed, std::strerror(errno));
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_addr = parsed.host;
    sa.sin_port = htons(parsed.port);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
        const std::string why = std::strerror(errno);
        ::close(fd);
        throw Error(Errc::ConnectionFailed, "cannot connect to " + addr + ": " + why);
    }
    return std::make_unique<TcpEndpoint>(fd);
}

// --- Session drivers ---

namespace {

void record(Transcript& transcript, bool outbound, const Frame& frame) {
    transcript.push_back({outbound, encode_frame(frame)});
}

}  // namespace

Transcript drive_cubic_sender(Endpoint& ep, CubicSender& sender) {
    Transcript transcript;
    while (sender.phase() != CubicPhase::Done && sender.phase() != CubicPhase::Failed) {
        const Frame frame = ep.recv();
        record(transcript, false, frame);
        if (auto out = sender.on_frame(frame)) {
            ep.send(*out);
            record(transcript, true, *out);
        }
    }
    return transcript;
}

Transcript drive_cubic_receiver(Endpoint& ep, CubicReceiver& receiver) {
    Transcript transcript;
    const Frame hello = receiver.start();
    ep.send(hello);
    record(transcript, true, hello);
    while (receiver.phase() != CubicPhase::Done && receiver.phase() != CubicPhase::Failed) {
        const Frame frame = ep.recv();
        record(transcript, false, frame);
        if (auto out = receiver.on_frame(frame)) {
            ep.send(*out);
            record(transcript, true, *out);
        }
    }
    return transcript;
}

Transcript drive_okx_peer(Endpoint& ep, OkxPeer& peer) {
    Transcript transcript;
    if (auto hello = peer.start()) {
        ep.send(*hello);
        record(transcript, true, *hello);
    }
    while (peer.phase() != OkxPhase::Done && peer.phase() != OkxPhase::Failed) {
        const Frame frame = ep.recv();
        record(transcript, false, frame);
        if (auto out = peer.on_frame(frame)) {
            ep.send(*out);
            record(transcript, true, *out);
        }
    }
    return transcript;
}

}  // namespace cubic
