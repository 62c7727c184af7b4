// Command-line peers and utilities for the cubic-transformation toolkit.
//
// Exit codes: 0 success, 1 protocol failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cubic/cubic_cipher.hpp"
#include "cubic/dh_okx.hpp"
#include "cubic/errors.hpp"
#include "cubic/numtheory.hpp"
#include "cubic/oblivious.hpp"
#include "cubic/rank_coding.hpp"
#include "cubic/rng.hpp"
#include "cubic/wire.hpp"

using namespace cubic;

namespace {

constexpr uint64_t kDefaultSeed = 0x5EED;

struct Options {
    uint64_t seed = kDefaultSeed;
    bool machine = false;
};

BigInt parse_bigint(const std::string& text, const char* what) {
    try {
        return BigInt::from_decimal(text);
    } catch (const std::invalid_argument&) {
        throw CLI::ValidationError(std::string(what) + " must be a decimal integer");
    }
}

bool is_usage_error(Errc code) {
    switch (code) {
        case Errc::BadKeyFile:
        case Errc::BadAddress:
        case Errc::BadPrimeClass:
        case Errc::OutOfRange:
        case Errc::BadRank:
        case Errc::NotCoprime:
        case Errc::NotInvertible:
            return true;
        default:
            return false;
    }
}

CubicPrivateKey load_private(const std::string& path) {
    const LoadedKey loaded = load_key_file(path);
    if (!loaded.has_private)
        throw Error(Errc::BadKeyFile, "'" + path + "' holds no private fields");
    return loaded.key;
}

void require_rank3(const CubicPublicKey& pub) {
    if (pub.a != 3)
        throw Error(Errc::BadKeyFile,
                    "rank framing is defined for a = 3 keys; this key has a = " +
                        std::to_string(pub.a));
}

int cmd_keygen(const Options& opt, const std::string& mode_name, uint32_t bits, uint32_t a,
               const std::string& out, const std::string& pub_out) {
    const KeyMode mode = mode_name == "composite" ? KeyMode::Composite : KeyMode::Prime;
    const CubicPrivateKey key = keygen(bits, mode, a, opt.seed);
    save_key_file(out, format_private_key(key));
    if (!pub_out.empty()) save_key_file(pub_out, format_public_key(key));
    if (opt.machine) {
        std::cout << "mode=" << mode_name << " a=" << a << " bits=" << bits << " n=" << key.pub.n
                  << " alpha=" << key.pub.alpha << " file=" << out << "\n";
    } else {
        std::cout << "wrote " << mode_name << " key (a=" << a << ", n=" << key.pub.n << ") to "
                  << out << "\n";
    }
    return 0;
}

int cmd_encrypt(const Options& opt, const std::string& key_path, const std::string& m_text) {
    const LoadedKey loaded = load_key_file(key_path);
    require_rank3(loaded.key.pub);
    const BigInt m = parse_bigint(m_text, "--m");
    const RankedCiphertext rc = encrypt_ranked(m, loaded.key.pub);
    const BigInt framed = encode_rank3(rc.c, rc.rank);
    if (opt.machine)
        std::cout << "m=" << m << " c=" << rc.c << " rank=" << rc.rank << " frame=" << framed
                  << "\n";
    else
        std::cout << framed << "\n";
    return 0;
}

int cmd_decrypt(const Options& opt, const std::string& key_path, const std::string& frame_text) {
    const CubicPrivateKey key = load_private(key_path);
    require_rank3(key.pub);
    const BigInt framed = parse_bigint(frame_text, "--frame");
    const auto [c, rank] = decode_rank3(framed);
    const BigInt m = decrypt_ranked(RankedCiphertext{c, rank}, key);
    if (opt.machine)
        std::cout << "frame=" << framed << " c=" << c << " rank=" << rank << " m=" << m << "\n";
    else
        std::cout << m << "\n";
    return 0;
}

int cmd_roots(const Options& opt, const std::string& key_path, const std::string& c_text) {
    const CubicPrivateKey key = load_private(key_path);
    const BigInt c = parse_bigint(c_text, "--c");
    const BigInt one = extract_root(c, key);
    const std::vector<BigInt> roots = all_roots(c, key.pub, one);
    if (opt.machine) {
        std::cout << "c=" << c << " roots=";
        for (size_t i = 0; i < roots.size(); ++i) std::cout << (i ? "," : "") << roots[i];
        std::cout << "\n";
    } else {
        for (size_t i = 0; i < roots.size(); ++i) std::cout << (i ? " " : "") << roots[i];
        std::cout << "\n";
    }
    return 0;
}

int cmd_ot_stats(const Options& opt, const std::string& key_path, uint64_t trials, bool fields) {
    const CubicPrivateKey key = load_private(key_path);
    if (key.mode != KeyMode::Composite)
        throw Error(Errc::BadKeyFile, "ot-stats needs a composite-mode key");
    const TrialStats stats = ot_success_rate(key, trials, opt.seed);
    if (fields) {
        std::cout << "a=" << key.pub.a << "\n"
                  << "n_bits=" << key.pub.n.bit_length() << "\n"
                  << "trials=" << stats.trials << "\n"
                  << "successes=" << stats.successes << "\n"
                  << "rate=" << stats.rate() << "\n";
    } else {
        std::cout << format_stats_line(key.pub.a, key.pub.n.bit_length(), stats) << "\n";
    }
    return 0;
}

int cmd_okx_simulate(const Options& opt, const std::string& p_text, const std::string& g_text,
                     uint32_t a, uint64_t trials, bool transcript) {
    const BigInt p = parse_bigint(p_text, "--p");
    const BigInt g = parse_bigint(g_text, "--g");
    const OkxParams params = okx_setup(p, g, a, opt.seed);
    if (transcript) {
        SplitMix64 rng(opt.seed);
        const OkxLocal alice = random_local(params, rng);
        const OkxLocal bob = random_local(params, rng);
        std::cout << format_transcript(params, okx_session(params, alice, bob));
        return 0;
    }
    const TrialStats stats = okx_agreement_rate(params, trials, opt.seed);
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.6f", stats.rate());
    std::cout << "a=" << a << " p=" << p << " trials=" << stats.trials
              << " successes=" << stats.successes << " rate=" << rate << "\n";
    return 0;
}

void print_okx_result(const Options& opt, const OkxPeer& peer) {
    const OkxParams& params = peer.params();
    if (opt.machine) {
        std::cout << "p=" << params.p << " g=" << params.g << " a=" << params.a
                  << " c=" << params.c << " key=" << peer.key().value << "\n";
    } else {
        std::cout << "local key: " << peer.key().value << "\n";
    }
}

int cmd_okx_listen(const Options& opt, const std::string& addr) {
    const auto ep = tcp_listen(addr);
    OkxPeer peer = OkxPeer::responder(opt.seed);
    drive_okx_peer(*ep, peer);
    print_okx_result(opt, peer);
    return 0;
}

int cmd_okx_connect(const Options& opt, const std::string& addr, const std::string& p_text,
                    const std::string& g_text, uint32_t a) {
    const BigInt p = parse_bigint(p_text, "--p");
    const BigInt g = parse_bigint(g_text, "--g");
    SplitMix64 rng(opt.seed);
    const OkxParams params = okx_setup(p, g, a, rng.next());
    const OkxLocal local = random_local(params, rng);
    const auto ep = tcp_connect(addr);
    OkxPeer peer = OkxPeer::initiator(params, local);
    drive_okx_peer(*ep, peer);
    print_okx_result(opt, peer);
    return 0;
}

int cmd_send(const Options& opt, const std::string& addr, const std::string& key_path,
             const std::string& m_text) {
    const BigInt m = parse_bigint(m_text, "--m");
    std::optional<CubicPublicKey> expected;
    if (!key_path.empty()) {
        const LoadedKey loaded = load_key_file(key_path);
        require_rank3(loaded.key.pub);
        expected = loaded.key.pub;
    }
    const auto ep = tcp_connect(addr);
    CubicSender sender(m);
    // Drive by hand so the published key can be checked against the local
    // file before anything is encrypted under it.
    while (sender.phase() != CubicPhase::Done && sender.phase() != CubicPhase::Failed) {
        const Frame frame = ep->recv();
        if (frame.type == msg_type::kPubKey && expected) {
            const auto [n, alpha] = parse_pubkey_frame(frame);
            if (n != expected->n || alpha != expected->alpha)
                throw Error(Errc::ProtocolViolation, "peer published a different key than " +
                                                         key_path);
        }
        if (auto out = sender.on_frame(frame)) ep->send(*out);
    }
    if (opt.machine)
        std::cout << "m=" << m << " frame=" << sender.framed_value()
                  << " rank=" << sender.sent_rank() << " ack=ok\n";
    else
        std::cout << "delivered; rank " << sender.sent_rank() << " acknowledged\n";
    return 0;
}

int cmd_recv(const Options& opt, const std::string& addr, const std::string& key_path) {
    const CubicPrivateKey key = load_private(key_path);
    const auto ep = tcp_listen(addr);
    CubicReceiver receiver(key);
    drive_cubic_receiver(*ep, receiver);
    if (opt.machine)
        std::cout << "m=" << receiver.received() << " rank=" << receiver.received_rank() << "\n";
    else
        std::cout << receiver.received() << "\n";
    return 0;
}

// Replays the built-in worked examples (p = 31 cubic exchange, p = 19
// oblivious key exchange) and checks every published value.
int cmd_demo() {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        if (!ok) ++failures;
    };
    auto joined = [](const std::vector<BigInt>& values) {
        std::string out;
        for (size_t i = 0; i < values.size(); ++i) {
            if (i) out += ",";
            out += values[i].to_decimal();
        }
        return out;
    };

    const CubicPrivateKey key31 = key_from_primes(31, std::nullopt, 3);
    const auto unity = all_roots(1, key31.pub, 1);
    check("cubic-unity-roots", unity == std::vector<BigInt>{1, 5, 25},
          "roots of 1 mod 31 = {" + joined(unity) + "}");

    const RankedCiphertext rc = encrypt_ranked(7, key31.pub);
    check("cubic-encrypt", rc.c == BigInt(2) && rc.rank == 2,
          "m=7 -> c=" + rc.c.to_decimal() + " rank=" + std::to_string(rc.rank));

    const BigInt framed = encode_rank3(rc.c, rc.rank);
    check("cubic-frame", framed == BigInt(9), "framed integer = " + framed.to_decimal() +
                                                  " (binary 1001)");

    const BigInt root = extract_root(2, key31);
    check("cubic-extract-root", root == BigInt(4), "2^7 mod 31 = " + root.to_decimal());

    const auto roots = all_roots(2, key31.pub, root);
    check("cubic-root-set", roots == std::vector<BigInt>{4, 7, 20},
          "root set = [" + joined(roots) + "]");

    const BigInt recovered = decrypt_ranked(rc, key31);
    check("cubic-decrypt", recovered == BigInt(7), "recovered m = " + recovered.to_decimal());

    {
        auto [alice_ep, bob_ep] = transport_pair();
        CubicReceiver receiver(key31);
        CubicSender sender(7);
        alice_ep->send(receiver.start());
        bool ok = true;
        try {
            auto cipher = sender.on_frame(bob_ep->recv());
            bob_ep->send(*cipher);
            auto ack = receiver.on_frame(alice_ep->recv());
            alice_ep->send(*ack);
            sender.on_frame(bob_ep->recv());
        } catch (const Error&) {
            ok = false;
        }
        ok = ok && receiver.received() == BigInt(7) && sender.phase() == CubicPhase::Done;
        check("cubic-wire-session", ok, "three-stage session delivered m=7, ack rank 2");
    }

    const OkxParams okx = okx_params_for_cipher(19, 2, 2, 9);
    check("okx-roots", okx.roots == std::vector<BigInt>{3, 16},
          "roots of 9 mod 19 = [" + joined(okx.roots) + "]");

    // Both parties use root 3; N1 = 7, N2 = 11.
    const uint32_t lo = 0, hi = 1;
    auto local = [](uint32_t own, const BigInt& n, uint32_t guess) {
        return OkxLocal{n, own, guess};
    };
    const BigInt msg_a = okx_message(okx, local(lo, 7, lo));
    const BigInt msg_b = okx_message(okx, local(lo, 11, lo));
    check("okx-messages", msg_a == BigInt(17) && msg_b == BigInt(6),
          "A->B " + msg_a.to_decimal() + ", B->A " + msg_b.to_decimal());

    const auto case1 = okx_session(okx, local(lo, 7, lo), local(lo, 11, lo));
    check("okx-case1", case1.alice_key.value == BigInt(13) && case1.bob_key.value == BigInt(13) &&
                           case1.agreed,
          "keys (" + case1.alice_key.value.to_decimal() + ", " +
              case1.bob_key.value.to_decimal() + ")");

    const auto case2 = okx_session(okx, local(lo, 7, hi), local(lo, 11, lo));
    check("okx-case2", case2.alice_key.value == BigInt(16) && case2.bob_key.value == BigInt(13) &&
                           !case2.agreed,
          "keys (" + case2.alice_key.value.to_decimal() + ", " +
              case2.bob_key.value.to_decimal() + ")");

    const auto case3 = okx_session(okx, local(lo, 7, hi), local(lo, 11, hi));
    check("okx-case3", case3.alice_key.value == BigInt(16) && case3.bob_key.value == BigInt(7) &&
                           !case3.agreed,
          "keys (" + case3.alice_key.value.to_decimal() + ", " +
              case3.bob_key.value.to_decimal() + ")");

    const auto case4 = okx_session(okx, local(lo, 7, lo), local(lo, 11, hi));
    check("okx-case4", case4.alice_key.value == BigInt(13) && case4.bob_key.value == BigInt(7) &&
                           !case4.agreed,
          "keys (" + case4.alice_key.value.to_decimal() + ", " +
              case4.bob_key.value.to_decimal() + ")");

    std::cout << (failures == 0 ? "PASS" : "FAIL") << " overall\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubic-transformation protocol toolkit"};
    app.fallthrough();
    Options opt;
    app.add_option("--seed", opt.seed, "seed for every randomized operation")
        ->default_val(kDefaultSeed);
    app.add_flag("--machine", opt.machine, "one key=value record per line");
    app.require_subcommand(1);

    // keygen
    auto* keygen_cmd = app.add_subcommand("keygen", "generate a key file");
    std::string mode = "prime";
    uint32_t bits = 32;
    uint32_t exponent = 3;
    std::string out_path;
    std::string pub_out;
    keygen_cmd->add_option("--mode", mode, "prime or composite")
        ->check(CLI::IsMember({"prime", "composite"}));
    keygen_cmd->add_option("--bits", bits, "bits per prime (>= 8)")->default_val(32);
    keygen_cmd->add_option("--a", exponent, "odd prime exponent")->default_val(3);
    keygen_cmd->add_option("--out", out_path, "private key file")->required();
    keygen_cmd->add_option("--pub-out", pub_out, "also write the public half");

    // encrypt / decrypt / roots
    auto* encrypt_cmd = app.add_subcommand("encrypt", "rank-frame a plaintext");
    std::string key_path, m_text;
    encrypt_cmd->add_option("--key", key_path, "key file")->required();
    encrypt_cmd->add_option("--m", m_text, "plaintext integer")->required();

    auto* decrypt_cmd = app.add_subcommand("decrypt", "decode and decrypt a framed integer");
    std::string dec_key, frame_text;
    decrypt_cmd->add_option("--key", dec_key, "private key file")->required();
    decrypt_cmd->add_option("--frame", frame_text, "framed integer")->required();

    auto* roots_cmd = app.add_subcommand("roots", "list all roots of a cipher");
    std::string roots_key, c_text;
    roots_cmd->add_option("--key", roots_key, "private key file")->required();
    roots_cmd->add_option("--c", c_text, "cipher value")->required();

    // ot-stats
    auto* ot_cmd = app.add_subcommand("ot-stats", "Monte Carlo oblivious-transfer rate");
    std::string ot_key;
    uint64_t ot_trials = 10000;
    bool ot_fields = false;
    ot_cmd->add_option("--key", ot_key, "composite private key file")->required();
    ot_cmd->add_option("--trials", ot_trials, "trial count")->default_val(10000);
    ot_cmd->add_flag("--fields", ot_fields, "one field per line");

    // okx family
    auto* okx_cmd = app.add_subcommand("okx", "oblivious key exchange");
    okx_cmd->require_subcommand(1);
    auto* sim_cmd = okx_cmd->add_subcommand("simulate", "run seeded sessions locally");
    std::string p_text = "19", g_text = "2";
    uint32_t okx_a = 2;
    uint64_t okx_trials = 10000;
    bool show_transcript = false;
    sim_cmd->add_option("--p", p_text, "prime modulus")->default_val("19");
    sim_cmd->add_option("--g", g_text, "base")->default_val("2");
    sim_cmd->add_option("--a", okx_a, "root exponent (2 or odd prime)")->default_val(2);
    sim_cmd->add_option("--trials", okx_trials, "trial count")->default_val(10000);
    sim_cmd->add_flag("--transcript", show_transcript, "print one session transcript");

    auto* listen_cmd = okx_cmd->add_subcommand("listen", "await a peer and exchange");
    std::string listen_addr;
    listen_cmd->add_option("addr", listen_addr, "host:port")->required();

    auto* connect_cmd = okx_cmd->add_subcommand("connect", "connect to a peer and exchange");
    std::string connect_addr, cp_text = "19", cg_text = "2";
    uint32_t ca = 2;
    connect_cmd->add_option("addr", connect_addr, "host:port")->required();
    connect_cmd->add_option("--p", cp_text, "prime modulus")->default_val("19");
    connect_cmd->add_option("--g", cg_text, "base")->default_val("2");
    connect_cmd->add_option("--a", ca, "root exponent")->default_val(2);

    // send / recv
    auto* send_cmd = app.add_subcommand("send", "three-stage session, sender side");
    std::string send_addr, send_key, send_m;
    send_cmd->add_option("addr", send_addr, "host:port")->required();
    send_cmd->add_option("--key", send_key, "public key file to cross-check")->required();
    send_cmd->add_option("--m", send_m, "plaintext integer")->required();

    auto* recv_cmd = app.add_subcommand("recv", "three-stage session, receiver side");
    std::string recv_addr, recv_key;
    recv_cmd->add_option("addr", recv_addr, "host:port")->required();
    recv_cmd->add_option("--key", recv_key, "private key file")->required();

    auto* demo_cmd = app.add_subcommand("demo-paper", "replay the built-in worked examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*keygen_cmd) return cmd_keygen(opt, mode, bits, exponent, out_path, pub_out);
        if (*encrypt_cmd) return cmd_encrypt(opt, key_path, m_text);
        if (*decrypt_cmd) return cmd_decrypt(opt, dec_key, frame_text);
        if (*roots_cmd) return cmd_roots(opt, roots_key, c_text);
        if (*ot_cmd) return cmd_ot_stats(opt, ot_key, ot_trials, ot_fields);
        if (*sim_cmd) return cmd_okx_simulate(opt, p_text, g_text, okx_a, okx_trials, show_transcript);
        if (*listen_cmd) return cmd_okx_listen(opt, listen_addr);
        if (*connect_cmd) return cmd_okx_connect(opt, connect_addr, cp_text, cg_text, ca);
        if (*send_cmd) return cmd_send(opt, send_addr, send_key, send_m);
        if (*recv_cmd) return cmd_recv(opt, recv_addr, recv_key);
        if (*demo_cmd) return cmd_demo();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_usage_error(e.code()) ? 2 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
