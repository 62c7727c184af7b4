#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cubic/bigint.hpp"
#include "cubic/cubic_cipher.hpp"
#include "cubic/dh_okx.hpp"
#include "cubic/errors.hpp"

namespace cubic {

// Wire envelope: magic 0x4B, one type byte, 4-byte big-endian payload
// length, payload. Integers inside payloads are minimal-length big-endian
// with a 2-byte big-endian length prefix each.
struct Frame {
    uint8_t type = 0;
    std::vector<uint8_t> payload;

    friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr uint8_t kFrameMagic = 0x4B;
inline constexpr uint32_t kMaxPayload = 1u << 24;

namespace msg_type {
inline constexpr uint8_t kPubKey = 0x01;
inline constexpr uint8_t kCipherRanked = 0x02;
inline constexpr uint8_t kAckRank = 0x03;
inline constexpr uint8_t kOkxMsg = 0x04;
inline constexpr uint8_t kParams = 0x05;
inline constexpr uint8_t kError = 0x7F;
}  // namespace msg_type

bool is_known_type(uint8_t type);

std::vector<uint8_t> encode_frame(const Frame& frame);
// Decodes exactly one frame occupying the whole buffer.
Frame decode_frame(std::span<const uint8_t> bytes);

void put_int(std::vector<uint8_t>& out, const BigInt& value);
BigInt get_int(std::span<const uint8_t> buf, size_t& pos);

Frame make_pubkey_frame(const CubicPublicKey& pub);           // n, alpha
Frame make_cipher_frame(const BigInt& framed_value);          // one rank-framed integer
Frame make_ack_frame(uint32_t rank);
Frame make_okx_msg_frame(const BigInt& value);
Frame make_params_frame(const OkxParams& params);             // p, g, c, a
Frame make_error_frame(const std::string& message);

std::pair<BigInt, BigInt> parse_pubkey_frame(const Frame& frame);  // (n, alpha)
BigInt parse_cipher_frame(const Frame& frame);
uint32_t parse_ack_frame(const Frame& frame);
BigInt parse_okx_msg_frame(const Frame& frame);
// (p, g, c, a)
std::tuple<BigInt, BigInt, BigInt, uint32_t> parse_params_frame(const Frame& frame);
std::string parse_error_frame(const Frame& frame);

// --- Three-stage cipher session (publish key, ranked cipher, rank ack) ---

enum class CubicPhase { AwaitKey, AwaitCipher, AwaitAck, Done, Failed };

// Bob: waits for the public key, sends the rank-framed cipher, verifies
// the echoed rank. Wire sessions use the three-root cipher, so the
// received key must carry a = 3.
class CubicSender {
public:
    explicit CubicSender(BigInt message);

    std::optional<Frame> on_frame(const Frame& frame);
    CubicPhase phase() const { return phase_; }
    uint32_t sent_rank() const { return sent_rank_; }
    const BigInt& framed_value() const { return framed_; }

private:
    BigInt message_;
    BigInt framed_;
    uint32_t sent_rank_ = 0;
    CubicPhase phase_ = CubicPhase::AwaitKey;
};

// Alice: publishes the key, decodes and decrypts the ranked cipher,
// acknowledges with the rank.
class CubicReceiver {
public:
    explicit CubicReceiver(CubicPrivateKey key);

    Frame start();  // emits the PUBKEY frame, once
    std::optional<Frame> on_frame(const Frame& frame);
    CubicPhase phase() const { return phase_; }
    const BigInt& received() const { return received_; }
    uint32_t received_rank() const { return received_rank_; }

private:
    CubicPrivateKey key_;
    BigInt received_;
    uint32_t received_rank_ = 0;
    CubicPhase phase_ = CubicPhase::AwaitKey;  // key not yet published
};

// --- Oblivious key-exchange session ---
//
// Initiator sends PARAMS, responder answers with its OKX message, the
// initiator replies with its own; each side then holds a local key. No
// key material or confirmation ever crosses the wire.

enum class OkxPhase { AwaitParams, AwaitMsg, Done, Failed };

class OkxPeer {
public:
    static OkxPeer initiator(OkxParams params, OkxLocal local);
    static OkxPeer responder(uint64_t seed);

    std::optional<Frame> start();  // initiator: PARAMS frame; responder: nothing
    std::optional<Frame> on_frame(const Frame& frame);
    OkxPhase phase() const { return phase_; }
    const OkxKey& key() const;
    const OkxParams& params() const;
    const OkxLocal& local() const;

private:
    OkxPeer() = default;

    bool initiator_ = false;
    bool started_ = false;
    uint64_t seed_ = 0;
    std::optional<OkxParams> params_;
    std::optional<OkxLocal> local_;
    std::optional<OkxKey> key_;
    OkxPhase phase_ = OkxPhase::AwaitParams;
};

// --- Transports ---

// Reliable, ordered delivery of whole frames. recv blocks up to the
// configured timeout (default 30 s) and throws Timeout when it elapses.
class Endpoint {
public:
    virtual ~Endpoint() = default;
    virtual void send(const Frame& frame) = 0;
    virtual Frame recv() = 0;
    virtual void close() = 0;

    void set_recv_timeout(std::chrono::milliseconds timeout) { timeout_ = timeout; }
    std::chrono::milliseconds recv_timeout() const { return timeout_; }

protected:
    std::chrono::milliseconds timeout_{30000};
};

// Deterministic lossless in-memory duplex pair.
std::pair<std::unique_ptr<Endpoint>, std::unique_ptr<Endpoint>> transport_pair();

// One-shot TCP endpoints; addr is "host:port" with a numeric IPv4 host
// (or "localhost").
class TcpListener {
public:
    explicit TcpListener(const std::string& addr);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::string local_address() const;  // with the actual bound port
    std::unique_ptr<Endpoint> accept(std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));

private:
    int fd_ = -1;
    std::string host_;
    uint16_t port_ = 0;
};

std::unique_ptr<Endpoint> tcp_listen(const std::string& addr);
std::unique_ptr<Endpoint> tcp_connect(const std::string& addr);

// --- Session drivers ---

struct TranscriptEntry {
    bool outbound = false;
    std::vector<uint8_t> bytes;  // encoded frame

    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};
using Transcript = std::vector<TranscriptEntry>;

Transcript drive_cubic_sender(Endpoint& ep, CubicSender& sender);
Transcript drive_cubic_receiver(Endpoint& ep, CubicReceiver& receiver);
Transcript drive_okx_peer(Endpoint& ep, OkxPeer& peer);

}  // namespace cubic
