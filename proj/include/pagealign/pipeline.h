#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pagealign/bundle.h"
#include "pagealign/consensus.h"
#include "pagealign/dp_align.h"
#include "pagealign/fingerprint.h"
#include "pagealign/seven_phase.h"

namespace pagealign {

enum class Variant { Sequential, LcsOnly, SevenPhaseOnly, Full };
enum class Mode { Full, Patch };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);
std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

struct MatchConfig {
  SevenPhaseConfig seven;
  DpConfig dp;

  void validate() const {
    seven.validate();
    dp.validate();
  }
};

// Intermediate products kept for inspection and tests.
struct MatchTrace {
  std::vector<AlignmentBlock> blocks;
  std::vector<Region> regions;
  std::vector<SevenPhaseResult> seven_phase;
  std::vector<RegionAlignment> dp;
};

// Full pipeline over precomputed fingerprints.
MatchResult match_documents(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                            std::span<const PageFingerprint> fps_old,
                            std::span<const PageFingerprint> fps_new, const MatchConfig& cfg,
                            Variant variant = Variant::Full, MatchTrace* trace = nullptr);

MatchResult match_documents(const DocumentBundle& old_doc, const DocumentBundle& new_doc,
                            const MatchConfig& cfg, Variant variant = Variant::Full);

}  // namespace pagealign
