#include "qrtm/control_plane.hpp"

#include <algorithm>

#include "qrtm/error.hpp"

namespace qrtm {

namespace {

constexpr std::uint8_t wire_version = 0x01;
constexpr std::size_t header_bytes = 1 + 8 + 32 + 4 + 4;

void put_u64(Bytes& out, std::uint64_t x) {
    for (int b = 7; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(x >> (8 * b)));
}

void put_u32(Bytes& out, std::uint32_t x) {
    for (int b = 3; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(x >> (8 * b)));
}

Bytes derive_seed(const Bytes& shared_secret, std::uint64_t cpi, const Bytes& cpi_secret) {
    Bytes msg = to_bytes("qrtm-cpi-seed");
    put_u64(msg, cpi);
    msg.insert(msg.end(), cpi_secret.begin(), cpi_secret.end());
    return hmac_sha256(shared_secret, msg);
}

std::array<std::uint8_t, 32> digest_of(const CodeSchedule& s) {
    const auto d = sha256(serialize_schedule(s));
    std::array<std::uint8_t, 32> out{};
    std::copy(d.begin(), d.end(), out.begin());
    return out;
}

}  // namespace

SessionState establish_session(CryptoProvider& provider, const AdversaryModel& adversary) {
    SessionState s;
    s.suite_id = provider.suite_id();
    s.post_quantum = provider.post_quantum();
    const auto uav_kem = provider.kem_keygen();
    const auto gnb_sig = provider.sig_keygen();
    const auto enc = provider.kem_encapsulate(uav_kem.public_key);
    const auto ss = provider.kem_decapsulate(uav_kem.secret_key, enc.ciphertext);
    if (ss != enc.shared_secret || ss.size() < 32) throw CryptoError("establish_session: KEM round trip failed");
    s.shared_secret = hmac_sha256(ss, to_bytes("qrtm-session"));
    s.peer_verifying_key = gnb_sig.verifying_key;
    s.signing_key = gnb_sig.signing_key;
    s.uav_kem_public_key = uav_kem.public_key;
    s.uav_kem_secret_key = uav_kem.secret_key;

    // Declarative accounting: PQC keys keep full strength against every
    // class; a classical suite falls to key recovery, and to HNDL later.
    s.entropy_bits = 256.0;
    s.entropy_bits_later = 256.0;
    if (!s.post_quantum) {
        if (adversary.key_recovery) {
            s.entropy_bits = 0.0;
            s.entropy_bits_later = 0.0;
            s.compromised = true;
        } else if (adversary.cls == AdversaryClass::A2) {
            s.entropy_bits_later = 0.0;
        }
    }
    return s;
}

std::size_t ScheduleCommitment::byte_size() const {
    return header_bytes + encapsulated_seed.size() + signature.size();
}

Bytes serialize_commitment(const ScheduleCommitment& c) {
    Bytes out;
    out.reserve(c.byte_size());
    out.push_back(wire_version);
    put_u64(out, c.cpi_index);
    out.insert(out.end(), c.schedule_digest.begin(), c.schedule_digest.end());
    put_u32(out, static_cast<std::uint32_t>(c.encapsulated_seed.size()));
    out.insert(out.end(), c.encapsulated_seed.begin(), c.encapsulated_seed.end());
    put_u32(out, static_cast<std::uint32_t>(c.signature.size()));
    out.insert(out.end(), c.signature.begin(), c.signature.end());
    return out;
}

ScheduleCommitment parse_commitment(std::span<const std::uint8_t> w) {
    std::size_t pos = 0;
    auto need = [&](std::size_t n) {
        if (w.size() - pos < n) throw DomainError("parse_commitment: truncated input");
    };
    auto u = [&](int bytes) {
        need(bytes);
        std::uint64_t x = 0;
        for (int i = 0; i < bytes; ++i) x = (x << 8) | w[pos++];
        return x;
    };
    ScheduleCommitment c;
    if (u(1) != wire_version) throw DomainError("parse_commitment: unknown version");
    c.cpi_index = u(8);
    need(32);
    std::copy_n(w.begin() + pos, 32, c.schedule_digest.begin());
    pos += 32;
    for (Bytes* field : {&c.encapsulated_seed, &c.signature}) {
        const auto len = static_cast<std::size_t>(u(4));
        need(len);
        field->assign(w.begin() + pos, w.begin() + pos + len);
        pos += len;
    }
    if (pos != w.size()) throw DomainError("parse_commitment: trailing bytes");
    return c;
}

Bytes signed_message(const ScheduleCommitment& c) {
    Bytes m;
    put_u64(m, c.cpi_index);
    m.insert(m.end(), c.schedule_digest.begin(), c.schedule_digest.end());
    m.insert(m.end(), c.encapsulated_seed.begin(), c.encapsulated_seed.end());
    return m;
}

Commit commit_schedule(SessionState& gnb, CryptoProvider& provider, const Codebook& codebook,
                       const ScenarioConfig& config) {
    if (gnb.shared_secret.size() < 32 || gnb.signing_key.empty()) throw CryptoError("commit_schedule: session not established");
    Commit out;
    auto& c = out.commitment;
    c.cpi_index = gnb.cpi_counter;
    const auto enc = provider.kem_encapsulate(gnb.uav_kem_public_key);
    const Bytes seed = derive_seed(gnb.shared_secret, c.cpi_index, enc.shared_secret);
    out.schedule = schedule_from_seed(seed, codebook, config, c.cpi_index);
    c.schedule_digest = digest_of(out.schedule);
    c.encapsulated_seed = enc.ciphertext;
    c.signature = provider.sign(gnb.signing_key, signed_message(c));
    ++gnb.cpi_counter;
    return out;
}

const char* to_string(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::accepted: return "accepted";
        case VerifyStatus::bad_signature: return "bad_signature";
        case VerifyStatus::replay: return "replay";
        case VerifyStatus::stale: return "stale";
        case VerifyStatus::digest_mismatch: return "digest_mismatch";
    }
    return "?";
}

Verification verify_commitment(SessionState& uav, const ScheduleCommitment& c, const CryptoProvider& provider,
                               const Codebook& codebook, const ScenarioConfig& config) {
    Verification v;
    if (!provider.verify(uav.peer_verifying_key, signed_message(c), c.signature)) {
        v.status = VerifyStatus::bad_signature;
        return v;
    }
    if (uav.replay_window.count(c.cpi_index)) {
        v.status = VerifyStatus::replay;
        return v;
    }
    if (c.cpi_index < uav.cpi_counter) {
        v.status = VerifyStatus::stale;
        return v;
    }
    const Bytes cpi_secret = provider.kem_decapsulate(uav.uav_kem_secret_key, c.encapsulated_seed);
    const Bytes seed = derive_seed(uav.shared_secret, c.cpi_index, cpi_secret);
    CodeSchedule s = schedule_from_seed(seed, codebook, config, c.cpi_index);
    if (digest_of(s) != c.schedule_digest) {
        v.status = VerifyStatus::digest_mismatch;
        return v;
    }
    uav.replay_window.insert(c.cpi_index);
    uav.cpi_counter = c.cpi_index + 1;
    v.status = VerifyStatus::accepted;
    v.schedule = std::move(s);
    return v;
}

ControlOverhead control_overhead(const CryptoProvider& provider, const ScenarioConfig& config) {
    ControlOverhead o;
    const auto sz = provider.sizes();
    o.bytes_per_cpi = header_bytes + static_cast<std::size_t>(sz.kem_ciphertext) + static_cast<std::size_t>(sz.signature);
    const auto t = provider.timings();
    // gNB encapsulates and signs; the UAV verifies and decapsulates.
    o.latency_s = t.encapsulate + t.sign + t.verify + t.decapsulate + 8.0 * o.bytes_per_cpi / config.control_link_bps;
    o.feasible = o.latency_s <= config.T_cpi && slot_timing(config).feasible;
    return o;
}

}  // namespace qrtm
