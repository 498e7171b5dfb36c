#include "qrtm/crypto.hpp"

#include <algorithm>

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

namespace qrtm {

Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

Bytes sha256(std::span<const std::uint8_t> msg) {
    Bytes out(32);
    unsigned int len = 0;
    if (EVP_Digest(msg.data(), msg.size(), out.data(), &len, EVP_sha256(), nullptr) != 1)
        throw CryptoError("sha256 failed");
    return out;
}

Bytes hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> msg) {
    Bytes out(32);
    unsigned int len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(), out.data(), &len))
        throw CryptoError("hmac-sha256 failed");
    return out;
}

Bytes shake256(std::span<const std::uint8_t> msg, std::size_t n) {
    Bytes out(n);
    if (n == 0) return out;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_shake256(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, msg.data(), msg.size()) == 1 && EVP_DigestFinalXOF(ctx, out.data(), n) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw CryptoError("shake256 failed");
    return out;
}

namespace {

Bytes concat(std::initializer_list<std::span<const std::uint8_t>> parts) {
    Bytes out;
    for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

// Deterministic filler extending a 32-byte core to `n` bytes (or truncating).
Bytes stretch(const Bytes& core, std::size_t n, const char* domain) {
    Bytes out(core.begin(), core.begin() + static_cast<std::ptrdiff_t>(std::min(core.size(), n)));
    if (n > out.size()) {
        const auto tail = shake256(concat({to_bytes(domain), core}), n - out.size());
        out.insert(out.end(), tail.begin(), tail.end());
    }
    return out;
}

Bytes public_core(std::span<const std::uint8_t> sk) { return sha256(concat({to_bytes("qrtm-kem-pk"), sk})); }

}  // namespace

EmulatedProvider::EmulatedProvider(std::string suite_id, bool pq, SuiteSizes sizes, SuiteTimings timings,
                                   std::uint64_t seed)
    : suite_(std::move(suite_id)), pq_(pq), sizes_(sizes), timings_(timings) {
    Bytes s(8);
    for (int b = 0; b < 8; ++b) s[b] = static_cast<std::uint8_t>(seed >> (56 - 8 * b));
    drbg_key_ = sha256(concat({to_bytes("qrtm-drbg:" + suite_), s}));
}

Bytes EmulatedProvider::random_bytes(std::size_t n) {
    Bytes out;
    while (out.size() < n) {
        Bytes ctr(8);
        for (int b = 0; b < 8; ++b) ctr[b] = static_cast<std::uint8_t>(drbg_counter_ >> (56 - 8 * b));
        ++drbg_counter_;
        const auto block = hmac_sha256(drbg_key_, ctr);
        out.insert(out.end(), block.begin(), block.end());
    }
    out.resize(n);
    return out;
}

KemKeyPair EmulatedProvider::kem_keygen() {
    KemKeyPair kp;
    kp.secret_key = random_bytes(32);
    kp.public_key = stretch(public_core(kp.secret_key), std::max(sizes_.kem_public_key, 32), "qrtm-kem-pk-pad");
    return kp;
}

KemEncapsulation EmulatedProvider::kem_encapsulate(std::span<const std::uint8_t> pk) {
    if (pk.size() < 32) throw CryptoError("kem_encapsulate: public key too short");
    const Bytes core(pk.begin(), pk.begin() + 32);
    const Bytes nonce = random_bytes(32);
    KemEncapsulation e;
    e.ciphertext = stretch(nonce, static_cast<std::size_t>(sizes_.kem_ciphertext), "qrtm-kem-ct-pad");
    const std::size_t used = std::min<std::size_t>(32, e.ciphertext.size());
    e.shared_secret = hmac_sha256(core, std::span(e.ciphertext.data(), used));
    return e;
}

Bytes EmulatedProvider::kem_decapsulate(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> ct) const {
    const Bytes core = public_core(sk);
    const std::size_t used = std::min<std::size_t>(32, ct.size());
    const Bytes nonce(ct.begin(), ct.begin() + static_cast<std::ptrdiff_t>(used));
    const Bytes expect = stretch(nonce, ct.size(), "qrtm-kem-ct-pad");
    if (ct.size() != static_cast<std::size_t>(sizes_.kem_ciphertext) ||
        CRYPTO_memcmp(expect.data(), ct.data(), ct.size()) != 0) {
        // Implicit rejection: a pseudorandom secret that matches nothing.
        return hmac_sha256(sk, concat({to_bytes("qrtm-kem-reject"), ct}));
    }
    return hmac_sha256(core, nonce);
}

SignatureKeyPair EmulatedProvider::sig_keygen() {
    SignatureKeyPair kp;
    kp.signing_key = random_bytes(32);
    kp.verifying_key = kp.signing_key;
    return kp;
}

Bytes EmulatedProvider::sign(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> msg) const {
    if (sk.size() < 32) throw CryptoError("sign: signing key too short");
    return stretch(hmac_sha256(sk, msg), static_cast<std::size_t>(sizes_.signature), "qrtm-sig-pad");
}

bool EmulatedProvider::verify(std::span<const std::uint8_t> vk, std::span<const std::uint8_t> msg,
                              std::span<const std::uint8_t> sig) const {
    if (vk.size() < 32 || sig.size() != static_cast<std::size_t>(sizes_.signature)) return false;
    const Bytes expect = sign(vk, msg);
    return CRYPTO_memcmp(expect.data(), sig.data(), sig.size()) == 0;
}

std::unique_ptr<CryptoProvider> make_pqc_test_provider(const ScenarioConfig& c, std::uint64_t seed) {
    return std::make_unique<EmulatedProvider>(
        "emulated-mlkem768-falcon512", true, SuiteSizes{c.kem_public_key_bytes, c.kem_ciphertext_bytes, c.signature_bytes},
        SuiteTimings{c.kem_encap_s, c.kem_decap_s, c.sign_s, c.verify_s}, seed);
}

std::unique_ptr<CryptoProvider> make_legacy_provider(const ScenarioConfig& c, std::uint64_t seed) {
    // Uncompressed P-256 points and a raw r||s signature.
    return std::make_unique<EmulatedProvider>("emulated-ecdh-ecdsa-p256", false, SuiteSizes{65, 65, 64},
                                              SuiteTimings{c.kem_encap_s, c.kem_decap_s, c.sign_s, c.verify_s}, seed);
}

std::unique_ptr<CryptoProvider> make_null_provider(std::uint64_t seed) {
    return std::make_unique<EmulatedProvider>("null", false, SuiteSizes{0, 0, 0}, SuiteTimings{}, seed);
}

}  // namespace qrtm
