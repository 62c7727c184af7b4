#include "cubic/cubic_cipher.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cubic/numtheory.hpp"
#include "cubic/rng.hpp"

namespace cubic {

namespace {

bool is_odd_prime_exponent(uint32_t a) {
    return a >= 3 && (a & 1u) && is_probable_prime(BigInt(a), 40);
}

void require_exponent(uint32_t a) {
    if (!is_odd_prime_exponent(a))
        throw std::invalid_argument("exponent a must be an odd prime, got " + std::to_string(a));
}

// p == 1 (mod a) and p != 1 (mod a^2): the a-th power map is a-to-1 and
// the exponent inverse exists.
void check_prime_class(const BigInt& p, uint32_t a) {
    if (!is_probable_prime(p, 40))
        throw Error(Errc::BadPrimeClass, p.to_decimal() + " is not prime");
    if (p.rem_u32(4) != 3)
        throw Error(Errc::BadPrimeClass, "p must be 3 (mod 4), got " + p.to_decimal());
    if (p.rem_u32(a) != 1)
        throw Error(Errc::BadPrimeClass, "p must be 1 (mod " + std::to_string(a) + ")");
    if (p.rem_u32(a * a) == 1)
        throw Error(Errc::BadPrimeClass,
                    "p must not be 1 (mod " + std::to_string(a * a) + ")");
}

void check_cofactor_class(const BigInt& q, const BigInt& p, uint32_t a) {
    if (!is_probable_prime(q, 40))
        throw Error(Errc::BadPrimeClass, q.to_decimal() + " is not prime");
    if (q.rem_u32(a) == 1)
        throw Error(Errc::BadPrimeClass, "q must not be 1 (mod " + std::to_string(a) + ")");
    if (q == p) throw Error(Errc::BadPrimeClass, "q must differ from p");
}

CubicPrivateKey assemble_key(const BigInt& p, const std::optional<BigInt>& q, uint32_t a) {
    CubicPrivateKey key;
    key.p = p;
    key.pub.a = a;
    const BigInt alpha_p = unity_root(p, a);
    if (q) {
        key.mode = KeyMode::Composite;
        key.q = *q;
        key.pub.n = p * *q;
        key.phi = (p - 1) * (*q - 1);
        // alpha == 1 (mod q) by construction; gcd(alpha - 1, n) = q is what
        // makes root collisions factor n.
        key.pub.alpha = crt_pair(alpha_p, p, 1, *q);
    } else {
        key.mode = KeyMode::Prime;
        key.pub.n = p;
        key.phi = p - 1;
        key.pub.alpha = alpha_p;
    }
    key.e = mod_inv(BigInt(a), key.phi / BigInt(a));
    return key;
}

}  // namespace

BigInt unity_root(const BigInt& p, uint32_t a) {
    require_exponent(a);
    if (p.rem_u32(a) != 1)
        throw Error(Errc::BadPrimeClass,
                    "no primitive root of unity: p != 1 (mod " + std::to_string(a) + ")");
    BigInt root;
    if (a == 3 && p.rem_u32(4) == 3) {
        // Primitive cube roots of unity are (-1 +- sqrt(-3)) / 2.
        const BigInt s = sqrt_mod(p - 3, p);
        const BigInt inv2 = mod_inv(2, p);
        const BigInt c1 = mod_mul((s + p - 1) % p, inv2, p);
        const BigInt c2 = mod_mul((p + p - 1 - s) % p, inv2, p);
        root = std::min(c1, c2);
    } else {
        const BigInt cofactor = (p - 1) / BigInt(a);
        for (uint64_t h = 2;; ++h) {
            if (h > 4096)
                throw Error(Errc::BadPrimeClass, "unity_root: no generator found; is p prime?");
            root = mod_pow(BigInt(h), cofactor, p);
            if (root != BigInt(1)) break;
        }
    }
    if (mod_pow(root, BigInt(a), p) != BigInt(1) % p || root == BigInt(1))
        throw Error(Errc::BadPrimeClass, "unity_root postcondition failed; is p prime?");
    return root;
}

CubicPrivateKey keygen(uint32_t bits_per_prime, KeyMode mode, uint32_t a, uint64_t seed) {
    if (bits_per_prime < 8)
        throw std::invalid_argument("keygen: bits_per_prime must be >= 8");
    require_exponent(a);
    SplitMix64 rng(seed);

    // p lies in one of the a-1 residue classes 1 + a*j (mod a^2); pick the
    // class at random per attempt so unlucky classes do not wedge small sizes.
    BigInt p;
    for (int attempt = 0;; ++attempt) {
        const uint64_t j = 1 + rng.below(a - 1);
        PrimeSpec spec;
        spec.bit_length = bits_per_prime;
        spec.congruences = {{BigInt(4), BigInt(3)}, {BigInt(a) * BigInt(a), BigInt(1 + a * j)}};
        try {
            p = gen_prime(spec, rng.next());
            break;
        } catch (const Error& e) {
            if (e.code() != Errc::SearchExhausted || attempt >= 8) throw;
        }
    }

    std::optional<BigInt> q;
    if (mode == KeyMode::Composite) {
        for (int attempt = 0;; ++attempt) {
            const uint64_t r = 2 + rng.below(a - 2);  // class in [2, a-1]
            PrimeSpec spec;
            spec.bit_length = bits_per_prime;
            spec.congruences = {{BigInt(a), BigInt(r)}};
            try {
                q = gen_prime(spec, rng.next());
                break;
            } catch (const Error& e) {
                if (e.code() != Errc::SearchExhausted || attempt >= 8) throw;
            }
        }
    }
    return assemble_key(p, q, a);
}

CubicPrivateKey key_from_primes(const BigInt& p, const std::optional<BigInt>& q, uint32_t a) {
    require_exponent(a);
    check_prime_class(p, a);
    if (q) check_cofactor_class(*q, p, a);
    return assemble_key(p, q, a);
}

BigInt encrypt(const BigInt& m, const CubicPublicKey& pub) {
    if (m.is_zero() || m >= pub.n)
        throw Error(Errc::OutOfRange, "plaintext must lie in [1, n)");
    const BigInt g = gcd(m, pub.n);
    if (g != BigInt(1))
        throw Error(Errc::NotCoprime,
                    "plaintext shares factor " + g.to_decimal() + " with the modulus");
    return mod_pow(m, BigInt(pub.a), pub.n);
}

BigInt extract_root(const BigInt& c, const CubicPrivateKey& priv) {
    if (c >= priv.pub.n) throw Error(Errc::OutOfRange, "ciphertext must lie in [0, n)");
    const BigInt root = mod_pow(c, priv.e, priv.pub.n);
    if (mod_pow(root, BigInt(priv.pub.a), priv.pub.n) != c)
        throw Error(Errc::RootCheckFailed,
                    c.to_decimal() + " is not an a-th power residue mod " + priv.pub.n.to_decimal());
    return root;
}

std::vector<BigInt> all_roots(const BigInt& c, const CubicPublicKey& pub, const BigInt& one_root) {
    if (one_root >= pub.n) throw Error(Errc::OutOfRange, "root must lie in [0, n)");
    if (mod_pow(one_root, BigInt(pub.a), pub.n) != c % pub.n)
        throw Error(Errc::RootCheckFailed, one_root.to_decimal() + " is not a root of " +
                                               c.to_decimal());
    std::vector<BigInt> roots;
    roots.reserve(pub.a);
    BigInt cur = one_root;
    for (uint32_t i = 0; i < pub.a; ++i) {
        roots.push_back(cur);
        cur = mod_mul(cur, pub.alpha, pub.n);
    }
    std::sort(roots.begin(), roots.end());
    if (std::adjacent_find(roots.begin(), roots.end()) != roots.end())
        throw Error(Errc::DegenerateRoots, "root set of " + c.to_decimal() + " is not distinct");
    return roots;
}

RankedCiphertext encrypt_ranked(const BigInt& m, const CubicPublicKey& pub) {
    const BigInt c = encrypt(m, pub);
    const std::vector<BigInt> roots = all_roots(c, pub, m);
    const auto it = std::lower_bound(roots.begin(), roots.end(), m);
    return {c, static_cast<uint32_t>(it - roots.begin()) + 1};
}

uint32_t rank_of(const BigInt& m, const CubicPublicKey& pub) { return encrypt_ranked(m, pub).rank; }

BigInt decrypt_ranked(const RankedCiphertext& rc, const CubicPrivateKey& priv) {
    if (rc.rank < 1 || rc.rank > priv.pub.a)
        throw Error(Errc::BadRank, "rank " + std::to_string(rc.rank) + " not in [1, " +
                                       std::to_string(priv.pub.a) + "]");
    const BigInt root = extract_root(rc.c, priv);
    const std::vector<BigInt> roots = all_roots(rc.c, priv.pub, root);
    return roots[rc.rank - 1];
}

namespace {

std::string format_key(const CubicPrivateKey& key, bool include_private) {
    std::ostringstream out;
    out << "version=1\n";
    out << "mode=" << (key.mode == KeyMode::Prime ? "prime" : "composite") << "\n";
    out << "a=" << key.pub.a << "\n";
    out << "n=" << key.pub.n << "\n";
    out << "alpha=" << key.pub.alpha << "\n";
    if (include_private) {
        out << "p=" << key.p << "\n";
        if (key.mode == KeyMode::Composite) out << "q=" << key.q << "\n";
        out << "phi=" << key.phi << "\n";
        out << "e=" << key.e << "\n";
    }
    return out.str();
}

std::string expect_field(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line))
        throw Error(Errc::BadKeyFile, "missing field '" + name + "'");
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.substr(0, eq) != name)
        throw Error(Errc::BadKeyFile, "expected '" + name + "=...', got '" + line + "'");
    return line.substr(eq + 1);
}

BigInt expect_int(std::istream& in, const std::string& name) {
    const std::string value = expect_field(in, name);
    try {
        return BigInt::from_decimal(value);
    } catch (const std::invalid_argument&) {
        throw Error(Errc::BadKeyFile, "field '" + name + "' is not a decimal integer");
    }
}

}  // namespace

std::string format_public_key(const CubicPrivateKey& key) { return format_key(key, false); }
std::string format_private_key(const CubicPrivateKey& key) { return format_key(key, true); }

LoadedKey parse_key(const std::string& text) {
    std::istringstream in(text);
    LoadedKey loaded;
    CubicPrivateKey& key = loaded.key;

    if (expect_field(in, "version") != "1")
        throw Error(Errc::BadKeyFile, "unsupported key file version");
    const std::string mode = expect_field(in, "mode");
    if (mode == "prime")
        key.mode = KeyMode::Prime;
    else if (mode == "composite")
        key.mode = KeyMode::Composite;
    else
        throw Error(Errc::BadKeyFile, "mode must be 'prime' or 'composite'");
    const BigInt a = expect_int(in, "a");
    if (!a.fits_u64() || !is_odd_prime_exponent(static_cast<uint32_t>(a.to_u64())))
        throw Error(Errc::BadKeyFile, "exponent a must be a small odd prime");
    key.pub.a = static_cast<uint32_t>(a.to_u64());
    key.pub.n = expect_int(in, "n");
    key.pub.alpha = expect_int(in, "alpha");
    if (key.pub.n < BigInt(2) || key.pub.alpha >= key.pub.n)
        throw Error(Errc::BadKeyFile, "modulus/alpha out of range");
    if (mod_pow(key.pub.alpha, BigInt(key.pub.a), key.pub.n) != BigInt(1) ||
        key.pub.alpha == BigInt(1))
        throw Error(Errc::BadKeyFile, "alpha is not a primitive root of unity mod n");

    std::string probe;
    if (!std::getline(in, probe)) return loaded;  // public key file
    if (probe.empty()) return loaded;             // trailing newline only

    auto parse_int = [](const std::string& name, const std::string& line) {
        const auto eq = line.find('=');
        if (eq == std::string::npos || line.substr(0, eq) != name)
            throw Error(Errc::BadKeyFile, "expected '" + name + "=...', got '" + line + "'");
        try {
            return BigInt::from_decimal(line.substr(eq + 1));
        } catch (const std::invalid_argument&) {
            throw Error(Errc::BadKeyFile, "field '" + name + "' is not a decimal integer");
        }
    };

    loaded.has_private = true;
    key.p = parse_int("p", probe);
    if (key.mode == KeyMode::Composite) key.q = expect_int(in, "q");
    key.phi = expect_int(in, "phi");
    key.e = expect_int(in, "e");

    const BigInt expected_n = key.mode == KeyMode::Composite ? key.p * key.q : key.p;
    const BigInt expected_phi =
        key.mode == KeyMode::Composite ? (key.p - 1) * (key.q - 1) : key.p - 1;
    if (expected_n != key.pub.n || expected_phi != key.phi)
        throw Error(Errc::BadKeyFile, "factors do not match the modulus");
    const BigInt unit = key.phi / BigInt(key.pub.a);
    if (key.e.is_zero() || key.e >= unit ||
        mod_mul(BigInt(key.pub.a), key.e, unit) != BigInt(1) % unit)
        throw Error(Errc::BadKeyFile, "decryption exponent is inconsistent with phi");
    return loaded;
}

LoadedKey load_key_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::BadKeyFile, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key(buf.str());
}

void save_key_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::BadKeyFile, "cannot write '" + path + "'");
    out << contents;
    if (!out.flush()) throw Error(Errc::BadKeyFile, "short write to '" + path + "'");
}

}  // namespace cubic
