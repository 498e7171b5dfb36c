#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qrtm/scenario.hpp"

namespace qrtm {

using Bytes = std::vector<std::uint8_t>;

Bytes sha256(std::span<const std::uint8_t> msg);
Bytes hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> msg);
Bytes shake256(std::span<const std::uint8_t> msg, std::size_t out_len);
Bytes to_bytes(const std::string& s);

struct KemKeyPair {
    Bytes public_key;
    Bytes secret_key;
};

struct KemEncapsulation {
    Bytes ciphertext;
    Bytes shared_secret;
};

struct SignatureKeyPair {
    Bytes signing_key;
    Bytes verifying_key;
};

struct SuiteSizes {
    int kem_public_key = 0;
    int kem_ciphertext = 0;
    int signature = 0;
};

struct SuiteTimings {
    double encapsulate = 0.0;
    double decapsulate = 0.0;
    double sign = 0.0;
    double verify = 0.0;
};

class CryptoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// KEM and signature primitives behind the control plane.
class CryptoProvider {
public:
    virtual ~CryptoProvider() = default;
    virtual std::string suite_id() const = 0;
    virtual bool post_quantum() const = 0;
    virtual SuiteSizes sizes() const = 0;
    virtual SuiteTimings timings() const = 0;

    virtual KemKeyPair kem_keygen() = 0;
    virtual KemEncapsulation kem_encapsulate(std::span<const std::uint8_t> public_key) = 0;
    virtual Bytes kem_decapsulate(std::span<const std::uint8_t> secret_key,
                                  std::span<const std::uint8_t> ciphertext) const = 0;
    virtual SignatureKeyPair sig_keygen() = 0;
    virtual Bytes sign(std::span<const std::uint8_t> signing_key, std::span<const std::uint8_t> msg) const = 0;
    virtual bool verify(std::span<const std::uint8_t> verifying_key, std::span<const std::uint8_t> msg,
                        std::span<const std::uint8_t> signature) const = 0;
};

/// Deterministic keyed-hash stand-in reproducing a suite's byte sizes.
/// Not secure: the "KEM" shared secret is derivable from the public key and
/// the verifying key equals the signing key. It exists to exercise the
/// protocol logic and overhead accounting reproducibly.
class EmulatedProvider final : public CryptoProvider {
public:
    EmulatedProvider(std::string suite_id, bool post_quantum, SuiteSizes sizes, SuiteTimings timings,
                     std::uint64_t seed);

    std::string suite_id() const override { return suite_; }
    bool post_quantum() const override { return pq_; }
    SuiteSizes sizes() const override { return sizes_; }
    SuiteTimings timings() const override { return timings_; }

    KemKeyPair kem_keygen() override;
    KemEncapsulation kem_encapsulate(std::span<const std::uint8_t> public_key) override;
    Bytes kem_decapsulate(std::span<const std::uint8_t> secret_key, std::span<const std::uint8_t> ciphertext) const override;
    SignatureKeyPair sig_keygen() override;
    Bytes sign(std::span<const std::uint8_t> signing_key, std::span<const std::uint8_t> msg) const override;
    bool verify(std::span<const std::uint8_t> verifying_key, std::span<const std::uint8_t> msg,
                std::span<const std::uint8_t> signature) const override;

private:
    Bytes random_bytes(std::size_t n);

    std::string suite_;
    bool pq_;
    SuiteSizes sizes_;
    SuiteTimings timings_;
    Bytes drbg_key_;
    std::uint64_t drbg_counter_ = 0;
};

/// ML-KEM-768 + Falcon-512 sizes and timings from the configuration.
std::unique_ptr<CryptoProvider> make_pqc_test_provider(const ScenarioConfig& config, std::uint64_t seed);
/// ECDH P-256 + ECDSA P-256 sizes; classical, so breakable under key recovery.
std::unique_ptr<CryptoProvider> make_legacy_provider(const ScenarioConfig& config, std::uint64_t seed);
/// Zero-size primitives: commitments carry only the header.
std::unique_ptr<CryptoProvider> make_null_provider(std::uint64_t seed);

}  // namespace qrtm
