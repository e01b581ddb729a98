#pragma once

#include <cstdint>
#include <string>

namespace guirepair::testing {

struct CheckResult {
  bool ok = true;
  std::string detail;
};

/// `run --mode replay --variant full` through the CLI reproduces each fixture's golden diff.
CheckResult check_golden_replay();
/// On the fixture without reproduction code only the full variant selects the golden patch.
CheckResult check_variant_semantics();
CheckResult check_edit_engine(int trials, std::uint64_t seed);
CheckResult check_retrieval_oracle(int corpora, std::uint64_t seed);
CheckResult check_codeview_soundness(int files, std::uint64_t seed);
CheckResult check_config_defaults();
CheckResult check_pixel_oracle(int pairs, std::uint64_t seed);
/// Replays every fixture in every variant; per-stage subtotals must sum to the totals.
CheckResult check_ledger_conservation();

}  // namespace guirepair::testing
