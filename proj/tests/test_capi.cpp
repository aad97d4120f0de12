#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "finmet.h"

namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& name) {
    const std::string dir = (fs::temp_directory_path() / name).string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and error strings") {
    CHECK(std::strcmp(fm_version(), "0.1.0") == 0);
    double f = 0.0;
    CHECK(fm_lc_frequency(2e-9, 400e-15, &f) == FM_OK);
    CHECK(f == doctest::Approx(5.627e9).epsilon(1e-3));
    CHECK(fm_lc_frequency(0.0, 400e-15, &f) == FM_ERR_CONFIG);
    CHECK(std::strlen(fm_last_error()) > 0);
    CHECK(fm_lc_frequency(2e-9, 400e-15, &f) == FM_OK);
    CHECK(std::strlen(fm_last_error()) == 0);  // cleared on success
}

TEST_CASE("scalar helpers") {
    double ratio = 0.0;
    int warn = -1;
    CHECK(fm_capacitance_ratio(6e9, 5.5e9, &ratio, &warn) == FM_OK);
    CHECK(ratio == doctest::Approx(1.1901).epsilon(1e-4));
    CHECK(warn == 0);
    CHECK(fm_capacitance_ratio(5.5e9, 6e9, &ratio, &warn) == FM_OK);
    CHECK(warn == 1);

    double kappa = 0.0;
    CHECK(fm_wkb_kappa(0.2, 1.0, &kappa) == FM_OK);
    CHECK(kappa == doctest::Approx(2.291e9).epsilon(1e-3));

    double fin = 0.0;
    CHECK(fm_undercut_correction(300e-9, 40.5e-9, &fin) == FM_OK);
    CHECK(fin == doctest::Approx(219e-9).epsilon(1e-9));
    CHECK(fm_undercut_correction(100e-9, 60e-9, &fin) == FM_ERR_CONFIG);

    double f01 = 0.0, anharm = 0.0;
    CHECK(fm_transmon_f01(12.5e9, 0.25e9, &f01, &anharm) == FM_OK);
    CHECK(f01 == doctest::Approx(4.75e9).epsilon(1e-12));
    CHECK(anharm == doctest::Approx(-0.25e9).epsilon(1e-12));
}

TEST_CASE("hanger fit through the flat-array interface") {
    const double f_r = 6e9, q_i = 1e5, q_c = 5e4;
    const double q = 1.0 / (1.0 / q_i + 1.0 / q_c);
    const double lw = f_r / q;
    std::vector<double> f(601), re(601), im(601);
    for (int i = 0; i < 601; ++i) {
        f[i] = f_r + lw * (-10.0 + 20.0 * i / 600.0);
        const std::complex<double> den(1.0, 2.0 * q * (f[i] - f_r) / f_r);
        const std::complex<double> s = 1.0 - (q / q_c) / den;
        re[i] = s.real();
        im[i] = s.imag();
    }
    double params[7] = {0}, sigma[7] = {0};
    REQUIRE(fm_fit_hanger(f.data(), re.data(), im.data(), f.size(), params, sigma) == FM_OK);
    CHECK(params[0] == doctest::Approx(f_r).epsilon(1e-8));
    CHECK(params[1] == doctest::Approx(q_i).epsilon(1e-6));
    CHECK(params[2] == doctest::Approx(q_c).epsilon(1e-6));
    CHECK(fm_fit_hanger(nullptr, re.data(), im.data(), 601, params, sigma) == FM_ERR_CONFIG);
}

TEST_CASE("config lifecycle and etchplan run") {
    fm_config* cfg = nullptr;
    REQUIRE(fm_config_default(&cfg) == FM_OK);
    REQUIRE(cfg != nullptr);
    CHECK(fm_config_set_seed(cfg, 77) == FM_OK);
    CHECK(fm_config_set_formats(cfg, "csv,txt") == FM_OK);
    CHECK(fm_config_set_formats(cfg, "bogus") == FM_ERR_CONFIG);

    const std::string dir = temp_dir("finmet_capi_etch");
    char* summary = nullptr;
    REQUIRE(fm_run_etchplan(cfg, dir.c_str(), &summary) == FM_OK);
    REQUIRE(summary != nullptr);
    CHECK(std::string(summary).find("cycles: 13") != std::string::npos);
    fm_string_free(summary);
    CHECK(fs::exists(dir + "/etchplan.csv"));
    CHECK(fs::exists(dir + "/etchplan.txt"));
    CHECK(fs::exists(dir + "/run_record.json"));
    fm_config_free(cfg);
}

TEST_CASE("config file loading: strict vs lenient") {
    const std::string dir = temp_dir("finmet_capi_cfg");
    const std::string path = dir + "/cfg.json";
    std::ofstream(path) << R"({"etch": {"initial_thikness": "80 nm"}})";

    fm_config* cfg = nullptr;
    CHECK(fm_config_load(path.c_str(), 1, &cfg) == FM_ERR_CONFIG);
    CHECK(std::string(fm_last_error()).find("initial_thikness") != std::string::npos);

    REQUIRE(fm_config_load(path.c_str(), 0, &cfg) == FM_OK);
    char* warnings = nullptr;
    CHECK(fm_config_warnings(cfg, &warnings) == FM_OK);
    CHECK(std::string(warnings).find("initial_thikness") != std::string::npos);
    fm_string_free(warnings);
    fm_config_free(cfg);

    CHECK(fm_config_load("/nonexistent/path.json", 1, &cfg) == FM_ERR_IO);
}

TEST_CASE("series run over a data file") {
    const std::string dir = temp_dir("finmet_capi_series");
    const std::string data = dir + "/die.csv";
    {
        std::ofstream out(data);
        out << "n_fins,f_hz\n";
        const double l = 1e-9, c0 = 550e-15, dc = 180e-15;
        for (int n = 0; n < 8; ++n) {
            out << n << "," << 1.0 / (2.0 * std::numbers::pi * std::sqrt(l * (c0 + n * dc)))
                << "\n";
        }
    }
    fm_config* cfg = nullptr;
    REQUIRE(fm_config_default(&cfg) == FM_OK);
    char* summary = nullptr;
    REQUIRE(fm_run_series(cfg, data.c_str(), dir.c_str(), &summary) == FM_OK);
    CHECK(std::string(summary).find("slope") != std::string::npos);
    fm_string_free(summary);
    CHECK(fs::exists(dir + "/series.csv"));
    CHECK(fs::exists(dir + "/series_fit.csv"));
    CHECK(fs::exists(dir + "/series.svg"));
    fm_config_free(cfg);
}

TEST_CASE("resfit pipeline: eight labeled traces reduce to the die slope") {
    const std::string dir = temp_dir("finmet_capi_die");
    // eight resonators sharing one inductor, fins adding capacitance
    const double l = 1e-9, c0 = 550e-15, dc = 180e-15;
    const double q_c = 5e4;
    std::vector<std::string> paths;
    for (int n = 0; n < 8; ++n) {
        const double f_r = 1.0 / (2.0 * std::numbers::pi * std::sqrt(l * (c0 + n * dc)));
        const double q_i = 8e4 + 1e4 * n;
        const double q = 1.0 / (1.0 / q_i + 1.0 / q_c);
        const double lw = f_r / q;
        std::ofstream out(dir + "/die_n" + std::to_string(n) + ".csv");
        out << "freq_hz,re,im\n";
        char buf[128];
        for (int i = 0; i < 301; ++i) {
            const double f = f_r + lw * (-8.0 + 16.0 * i / 300.0);
            const std::complex<double> den(1.0, 2.0 * q * (f - f_r) / f_r);
            const std::complex<double> s = 1.0 - (q / q_c) / den;
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f, s.real(), s.imag());
            out << buf;
        }
        paths.push_back(dir + "/die_n" + std::to_string(n) + ".csv");
    }
    std::vector<const char*> cpaths;
    for (const auto& p : paths) cpaths.push_back(p.c_str());

    // config without a fin block: series reduction runs, loss extraction is skipped
    const std::string cfg_path = dir + "/cfg.json";
    std::ofstream(cfg_path) << R"({"resonator": {"inductance": "1 nH"}})";
    fm_config* cfg = nullptr;
    REQUIRE(fm_config_load(cfg_path.c_str(), 1, &cfg) == FM_OK);
    char* summary = nullptr;
    REQUIRE(fm_run_resfit(cfg, cpaths.data(), cpaths.size(), dir.c_str(), &summary) == FM_OK);
    const std::string text = summary;
    fm_string_free(summary);
    fm_config_free(cfg);
    CHECK(text.find("8 trace(s) fitted") != std::string::npos);
    CHECK(text.find("slope dC/C0") != std::string::npos);
    CHECK(fs::exists(dir + "/resfit.csv"));
    REQUIRE(fs::exists(dir + "/series.csv"));

    // the reduced slope matches the synthesis input dC/C0
    std::ifstream series(dir + "/series.csv");
    std::string line;
    std::getline(series, line);  // header
    int rows = 0;
    double last_ratio = 0.0;
    while (std::getline(series, line)) {
        ++rows;
        last_ratio = std::stod(line.substr(line.rfind(',') + 1));
    }
    CHECK(rows == 8);
    const double expected_r7 = (c0 + 7 * dc) / c0;
    CHECK(last_ratio == doctest::Approx(expected_r7).epsilon(1e-9));

    // with a fin geometry in the config the command also extracts the loss
    // budget from the fitted Q_i and the solver participations
    const std::string loss_cfg = dir + "/loss_cfg.json";
    std::ofstream(loss_cfg) << R"({
        "resonator": {"inductance": "1 nH"},
        "fin": {"thickness": "100 nm", "height": "0.8 um", "pad_extent": "0.4 um"},
        "solver": {"padding_factor": 3.0, "dx_schedule": ["12.5 nm", "10 nm"]}
    })";
    fm_config* cfg2 = nullptr;
    REQUIRE(fm_config_load(loss_cfg.c_str(), 1, &cfg2) == FM_OK);
    const std::string dir2 = temp_dir("finmet_capi_die_loss");
    char* summary2 = nullptr;
    REQUIRE(fm_run_resfit(cfg2, cpaths.data(), cpaths.size(), dir2.c_str(), &summary2) == FM_OK);
    const std::string text2 = summary2;
    fm_string_free(summary2);
    fm_config_free(cfg2);
    CHECK(text2.find("loss extraction") != std::string::npos);
    CHECK(fs::exists(dir2 + "/loss_budget.csv"));
}

TEST_CASE("design run reports the footprint reduction for a 10 um junction") {
    const std::string dir = temp_dir("finmet_capi_design");
    const std::string cfg_path = dir + "/cfg.json";
    // (10 um)^2 junction vs the default 200 x 400 um^2 reference pad
    std::ofstream(cfg_path) << R"({
        "junction": {"area": "100 um^2"},
        "monte_carlo": {"samples": 1000}
    })";
    fm_config* cfg = nullptr;
    REQUIRE(fm_config_load(cfg_path.c_str(), 1, &cfg) == FM_OK);
    char* summary = nullptr;
    REQUIRE(fm_run_design(cfg, dir.c_str(), &summary) == FM_OK);
    const std::string text = summary;
    fm_string_free(summary);
    fm_config_free(cfg);
    CHECK(text.find("800x smaller") != std::string::npos);

    // csv re-ingests with the exact value
    std::ifstream csv(dir + "/design.csv");
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    const std::size_t col = [&] {
        std::size_t n = 0, pos = 0;
        const std::string target = "footprint_reduction";
        std::stringstream ss(header);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (cell == target) return n;
            ++n;
        }
        (void)pos;
        return n;
    }();
    std::stringstream ss(row);
    std::string cell;
    for (std::size_t k = 0; k <= col; ++k) std::getline(ss, cell, ',');
    CHECK(std::stod(cell) == doctest::Approx(800.0).epsilon(1e-12));
}

TEST_CASE("resfit error codes") {
    fm_config* cfg = nullptr;
    REQUIRE(fm_config_default(&cfg) == FM_OK);
    const std::string dir = temp_dir("finmet_capi_resfit");
    CHECK(fm_run_resfit(cfg, nullptr, 0, dir.c_str(), nullptr) == FM_ERR_CONFIG);
    const char* missing[] = {"/no/such/trace.s2p"};
    CHECK(fm_run_resfit(cfg, missing, 1, dir.c_str(), nullptr) == FM_ERR_IO);

    // a failing trace in a batch is still nonzero, but the batch continues
    const double f_r = 6e9, q = 3e4, q_c = 5e4;
    std::ofstream good(dir + "/good.csv");
    good << "freq_hz,re,im\n";
    char buf[128];
    for (int i = 0; i < 201; ++i) {
        const double f = f_r + (f_r / q) * (-8.0 + 16.0 * i / 200.0);
        const std::complex<double> den(1.0, 2.0 * q * (f - f_r) / f_r);
        const std::complex<double> s = 1.0 - (q / q_c) / den;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f, s.real(), s.imag());
        good << buf;
    }
    good.close();
    const std::string good_path = dir + "/good.csv";
    const char* mixed[] = {good_path.c_str(), "/no/such/trace.s2p"};
    char* summary = nullptr;
    CHECK(fm_run_resfit(cfg, mixed, 2, dir.c_str(), &summary) == FM_ERR_IO);
    REQUIRE(summary != nullptr);
    CHECK(std::string(summary).find("1 trace(s) fitted, 1 failed") != std::string::npos);
    fm_string_free(summary);
    CHECK(std::string(fm_last_error()).find("/no/such/trace.s2p") != std::string::npos);
    CHECK(fs::exists(dir + "/resfit.csv"));
    fm_config_free(cfg);
}

TEST_CASE("design flags out-of-regime junctions") {
    const std::string dir = temp_dir("finmet_capi_regime");
    const std::string cfg_path = dir + "/cfg.json";
    // two orders of magnitude more resistive: E_J collapses out of the regime
    std::ofstream(cfg_path) << R"({
        "junction": {"r0": "8.0e-22 ohm.m^2"},
        "monte_carlo": {"samples": 1000}
    })";
    fm_config* cfg = nullptr;
    REQUIRE(fm_config_load(cfg_path.c_str(), 1, &cfg) == FM_OK);
    char* summary = nullptr;
    REQUIRE(fm_run_design(cfg, dir.c_str(), &summary) == FM_OK);
    CHECK(std::string(summary).find("OUT OF TRANSMON REGIME") != std::string::npos);
    fm_string_free(summary);
    fm_config_free(cfg);
}

TEST_CASE("etchplan in ALE mode") {
    const std::string dir = temp_dir("finmet_capi_ale");
    const std::string cfg_path = dir + "/cfg.json";
    std::ofstream(cfg_path) << R"({
        "etch": {"process": "ale", "initial_thickness": "12 nm", "target_thickness": "8 nm",
                 "ale_removal_per_side": "0.1 nm"}
    })";
    fm_config* cfg = nullptr;
    REQUIRE(fm_config_load(cfg_path.c_str(), 1, &cfg) == FM_OK);
    char* summary = nullptr;
    REQUIRE(fm_run_etchplan(cfg, dir.c_str(), &summary) == FM_OK);
    const std::string text = summary;
    fm_string_free(summary);
    fm_config_free(cfg);
    CHECK(text.find("ALE plan") != std::string::npos);
    CHECK(text.find("cycles: 20") != std::string::npos);
}

}  // TEST_SUITE
