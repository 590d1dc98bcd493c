#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "vlcmimo/codebook.hpp"
#include "vlcmimo/sim.hpp"

namespace vlcmimo {

// Folds bound and MI rows into the detector rows of matching SNR points;
// points without detector rows get a standalone row with an empty detector
// column. Any argument may be null.
std::vector<PointRecord> merge_sweep_rows(const SweepResult* cer, const SweepResult* bound,
                                          const SweepResult* mi);

// RFC-4180 CSV with the fixed column set
// snr_db,detector,trials,errors,cer,ci_lo,ci_hi,fallbacks,bound_raw,
// bound_clamped,mi,mi_se. Absent metrics are empty fields.
std::string sweep_csv(const std::vector<PointRecord>& rows);

// The same rows as an array of objects keyed by the CSV column names;
// absent metrics are null.
nlohmann::json sweep_json_rows(const std::vector<PointRecord>& rows);

// Plain-text codebook dump: a header line
// "# n_t=<v> gamma=<p>/<q> method=<fill|complement> k=<v>" followed by one
// block per matrix, rows as space-separated 0/1, blank line between blocks.
std::string codebook_dump_text(const CodebookSpec& spec);

// JSON form: the header fields plus "matrices", an array of matrices given
// as arrays of row digit-strings.
nlohmann::json codebook_dump_json(const CodebookSpec& spec);

}  // namespace vlcmimo
