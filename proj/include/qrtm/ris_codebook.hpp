#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrtm/numerics/rng.hpp"
#include "qrtm/scenario.hpp"

namespace qrtm {

/// Quantized RIS configuration: element m applies phase 2*pi*idx[m]/2^bits.
struct RisProfile {
    std::vector<std::uint8_t> idx;
    int bits = 1;

    int size() const { return static_cast<int>(idx.size()); }
    double phase(int m) const;
    friend bool operator==(const RisProfile&, const RisProfile&) = default;
};

/// The 2^bits unit phasors of the quantization alphabet.
std::vector<std::complex<double>> phase_alphabet(int bits);

int hamming_distance(const RisProfile& a, const RisProfile& b);

struct Codebook {
    std::vector<RisProfile> profiles;
    int size() const { return static_cast<int>(profiles.size()); }
};

/// Base profile plus codebook_size - 1 variants, each re-drawing
/// floor(S_max / 2) distinct elements to a different phase index. Any two
/// entries therefore differ in at most S_max elements.
Codebook make_codebook(const RisProfile& base, const ScenarioConfig& config, numerics::RngStream& rng);

/// A CPI's slot-by-slot program. `profiles` holds the distinct profiles in
/// use; `slots[p]` indexes into it. `labels[k]` is the codebook index a
/// profile was drawn from, or -1 for inserted intermediates.
struct CodeSchedule {
    std::vector<RisProfile> profiles;
    std::vector<int> labels;
    std::vector<std::uint32_t> slots;

    const RisProfile& at_slot(std::size_t p) const { return profiles.at(slots.at(p)); }
    int slot_count() const { return static_cast<int>(slots.size()); }
    /// Number of element switches across all slot boundaries.
    long total_switches() const;
};

/// A constraint breach at one place in a schedule. `constraint` is one of
/// "Q", "S", "D1", "D2", "T" (slot timing) or "len".
struct Violation {
    std::string constraint;
    int slot = -1;
    std::string detail;
};

std::vector<Violation> validate_schedule(const CodeSchedule& schedule, const ScenarioConfig& config);

struct InfeasibilityReport {
    int slots_required = 0;
    int slots_available = 0;
    std::vector<std::string> reasons;
    std::string recommendation;
};

class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(InfeasibilityReport report);
    const InfeasibilityReport& report() const noexcept { return report_; }

private:
    InfeasibilityReport report_;
};

struct SequencingResult {
    CodeSchedule schedule;
    int intermediates = 0;
};

/// Lay out `visits` in order, each dwelling at least d_min slots. Where two
/// consecutive visits differ in more than S_max elements, the fewest
/// intermediates (ceil(distance / S_max) - 1) are inserted, each flipping the
/// lowest-indexed remaining differing elements. Leftover slots extend dwells
/// round-robin from the first. Throws InfeasibleError if the layout cannot
/// fit M_code slots.
SequencingResult min_change_sequencing(std::span<const RisProfile> visits, const ScenarioConfig& config,
                                       std::span<const int> labels = {});

/// Keyed schedule: the codebook index of dwell k is read from the k-th
/// 8-byte word of SHAKE256(seed || cpi_index), then the dwells are laid
/// out by min_change_sequencing. seed must be at least 32 bytes.
CodeSchedule schedule_from_seed(std::span<const std::uint8_t> seed, const Codebook& codebook,
                                const ScenarioConfig& config, std::uint64_t cpi_index = 0);

/// Canonical byte serialization, used for commitment digests.
std::vector<std::uint8_t> serialize_schedule(const CodeSchedule& schedule);

/// One line per slot: "slot=<p> label=<k> hamming=<d> idx=<hex digits>".
std::string audit_text(const CodeSchedule& schedule);

}  // namespace qrtm
