#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ckomit/circuit.hpp"
#include "ckomit/response.hpp"
#include "ckomit/stability.hpp"
#include "ckomit/sweep.hpp"

namespace ckomit {

inline constexpr int kSchemaVersion = 1;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const; // throws ExportError
};

// Shortest round-trip representation (at most 17 significant digits); NaN is blank.
std::string format_number(double v);
double parse_cell(const std::string& cell); // blank reads back as NaN

std::string to_csv(const Table& t);
Table parse_csv(const std::string& text);
void write_csv(const std::filesystem::path& path, const Table& t);
Table read_csv(const std::filesystem::path& path);

// delta_rad_s, delta_norm, re_eps, im_eps, abs_eps, phase_rad, group_delay_s
Table spectrum_table(const ResponseSpectrum& s);

// Long format: one row per sweep point and probe detuning, selected outputs only.
// Rows of points without a spectrum keep their metadata and leave outputs blank.
Table sweep_table(const SweepResult& r);

// One row per sweep point with the window metrics.
Table window_table(const SweepResult& r);

std::string circuit_json(const CompiledCircuit& c);
std::string steady_state_json(const SteadyState& ss, const SystemParams& p);
std::string stability_json(const StabilityReport& r, const CovarianceMatrix* covariance);
std::string spectrum_json(const ResponseSpectrum& s);
std::string sweep_json(const SweepResult& r);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_lines(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series);
// z is row-major with y.size() rows of x.size() entries; NaN cells stay empty.
std::string svg_heatmap(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                        const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace ckomit
