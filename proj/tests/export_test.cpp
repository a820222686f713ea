#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "ckomit/errors.hpp"
#include "ckomit/export.hpp"
#include "support.hpp"

using namespace ckomit;

TEST(FormatNumber, RoundTripsBitExactly) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-300.0, 300.0);
    for (int i = 0; i < 10000; ++i) {
        const double v = (i % 2 ? -1.0 : 1.0) * std::pow(10.0, u(rng));
        const std::string s = format_number(v);
        EXPECT_EQ(parse_cell(s), v) << s;
        EXPECT_LE(s.size(), 25u);
    }
    EXPECT_EQ(format_number(std::nan("")), "");
    EXPECT_TRUE(std::isnan(parse_cell("")));
    EXPECT_EQ(parse_cell(format_number(0.1)), 0.1);
}

TEST(Csv, QuotingRoundTrip) {
    Table t;
    t.header = {"name", "note", "value"};
    t.rows = {{"a,b", "say \"hi\"", "1.5"}, {"plain", "line\nbreak", ""}};
    const std::string text = to_csv(t);
    EXPECT_NE(text.find("\"a,b\""), std::string::npos);
    EXPECT_NE(text.find("\"say \"\"hi\"\"\""), std::string::npos);
    const Table back = parse_csv(text);
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.rows, t.rows);
}

TEST(Csv, FileRoundTripAndMissingColumn) {
    Table t;
    t.header = {"x", "y"};
    for (int i = 0; i < 20; ++i) t.rows.push_back({format_number(i * 0.1), format_number(std::exp(i * 0.37))});
    const auto path = std::filesystem::temp_directory_path() / "ckomit_export_test.csv";
    write_csv(path, t);
    const Table back = read_csv(path);
    std::filesystem::remove(path);
    ASSERT_EQ(back.rows.size(), t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        EXPECT_EQ(parse_cell(back.rows[i][1]), parse_cell(t.rows[i][1]));
    EXPECT_EQ(back.column("y"), 1u);
    EXPECT_THROW(back.column("z"), ExportError);
}

TEST(Csv, WriteFailureNamesPath) {
    Table t;
    t.header = {"x"};
    try {
        write_csv("/nonexistent-dir/out.csv", t);
        FAIL() << "expected ExportError";
    } catch (const ExportError& e) {
        EXPECT_EQ(e.path(), "/nonexistent-dir/out.csv");
    }
}

TEST(SpectrumTable, DocumentedColumns) {
    ResponseSpectrum s;
    s.normalization = 2.0;
    ResponsePoint pt;
    pt.delta = 1.0;
    pt.eps = cd(0.5, -0.25);
    pt.phase = std::arg(pt.eps);
    pt.group_delay = 3e-7;
    s.points = {pt};
    const Table t = spectrum_table(s);
    const std::vector<std::string> header{"delta_rad_s", "delta_norm", "re_eps", "im_eps",
                                          "abs_eps", "phase_rad", "group_delay_s"};
    EXPECT_EQ(t.header, header);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(parse_cell(t.rows[0][1]), 0.5);
    EXPECT_EQ(parse_cell(t.rows[0][3]), -0.25);
    EXPECT_EQ(parse_cell(t.rows[0][6]), 3e-7);
}

TEST(Svg, HeatmapAndLinesAreWellFormed) {
    const std::string lines = svg_lines("t", "x", "y", {{"a", {0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}}});
    EXPECT_EQ(lines.rfind("<svg", 0) == 0 || lines.find("<svg") != std::string::npos, true);
    EXPECT_NE(lines.find("</svg>"), std::string::npos);
    const std::string heat = svg_heatmap("t", "x", "y", {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0, std::nan(""), 0.5});
    EXPECT_NE(heat.find("</svg>"), std::string::npos);
}
