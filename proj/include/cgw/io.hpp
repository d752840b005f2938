#pragma once

#include "cgw/config.hpp"
#include "cgw/diagnostics.hpp"
#include "cgw/errors.hpp"

#include <string>
#include <vector>

namespace cgw {

// Creates parent directories; throws Error on failure.
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const json& j);

// Columns with a header line; every value printed round-trip exact.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols);

// wave.csv (surface fields), psi.csv (strip field, one row per Chebyshev node),
// wave.meta.json and convergence.csv in `dir`.
void save_wave_state(const std::string& dir, const WaveState& s);
// Inverse of save_wave_state; the grid is rebuilt from the metadata.
WaveState load_wave_state(const std::string& dir);

json wave_meta_json(const WaveState& s);
json report_json(const DipoleReport& r, const WaveState& s);
json far_field_json(const FarFieldReport& r, const VorticityModel& m);
std::string record_csv(const ContinuationRecord& rec);
json error_json(const Error& e, int exit_code);

} // namespace cgw
