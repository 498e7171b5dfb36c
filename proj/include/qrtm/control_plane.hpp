#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>

#include "qrtm/crypto.hpp"
#include "qrtm/ris_codebook.hpp"
#include "qrtm/scene_auth.hpp"

namespace qrtm {

/// One end of a gNB-initiated session. Both ends start from the same
/// establish_session() result; the gNB keeps the signing key, the UAV the
/// KEM secret key.
struct SessionState {
    std::string suite_id;
    bool post_quantum = false;
    Bytes shared_secret;
    std::uint64_t cpi_counter = 0;  // next CPI index to commit or accept
    double entropy_bits = 0.0;      // H(K | adversary) now
    double entropy_bits_later = 0.0;  // after a harvest-now-decrypt-later phase
    bool compromised = false;
    Bytes peer_verifying_key;
    Bytes signing_key;
    Bytes uav_kem_public_key;
    Bytes uav_kem_secret_key;
    std::set<std::uint64_t> replay_window;
};

SessionState establish_session(CryptoProvider& provider, const AdversaryModel& adversary);

struct ScheduleCommitment {
    std::uint64_t cpi_index = 0;
    std::array<std::uint8_t, 32> schedule_digest{};
    Bytes encapsulated_seed;
    Bytes signature;

    std::size_t byte_size() const;
};

/// Wire layout, all integers big-endian:
///   u8 version (0x01) | u64 cpi_index | 32 B digest |
///   u32 len | encapsulation | u32 len | signature
Bytes serialize_commitment(const ScheduleCommitment& c);
/// Throws DomainError on truncation, trailing bytes or an unknown version.
ScheduleCommitment parse_commitment(std::span<const std::uint8_t> wire);

/// The byte string the signature covers: cpi_index || digest || encapsulation.
Bytes signed_message(const ScheduleCommitment& c);

struct Commit {
    ScheduleCommitment commitment;
    CodeSchedule schedule;
};

/// Derives the CPI seed from the shared secret, the CPI index and a fresh
/// KEM encapsulation, builds schedule_from_seed, signs, and advances the
/// counter.
Commit commit_schedule(SessionState& gnb, CryptoProvider& provider, const Codebook& codebook,
                       const ScenarioConfig& config);

enum class VerifyStatus { accepted, bad_signature, replay, stale, digest_mismatch };

const char* to_string(VerifyStatus s);

struct Verification {
    VerifyStatus status = VerifyStatus::bad_signature;
    std::optional<CodeSchedule> schedule;
    bool accepted() const { return status == VerifyStatus::accepted; }
};

Verification verify_commitment(SessionState& uav, const ScheduleCommitment& c, const CryptoProvider& provider,
                               const Codebook& codebook, const ScenarioConfig& config);

struct ControlOverhead {
    std::size_t bytes_per_cpi = 0;
    double latency_s = 0.0;
    bool feasible = false;  // latency fits inside one CPI and slot timing holds
};

ControlOverhead control_overhead(const CryptoProvider& provider, const ScenarioConfig& config);

}  // namespace qrtm
