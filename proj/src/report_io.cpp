#include "ars/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ars/errors.hpp"
#include "ars/table.hpp"

namespace ars {

namespace {

// All numbers pass through a 12-significant-digit round trip, which makes
// written reports re-read equal field by field.
double round12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

nlohmann::json vec_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(round12(v[i]));
    return arr;
}

Eigen::VectorXd vec_from_json(const nlohmann::json& arr) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    Eigen::Index i = 0;
    for (const auto& x : arr) v[i++] = x.get<double>();
    return v;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

std::string num12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ConfigError("unknown report format \"" + name + "\" (expected json or csv)");
}

nlohmann::json to_json(const TestReport& report) {
    nlohmann::json j;
    j["statistic"] = round12(report.statistic);
    j["dof"] = report.dof;
    j["p_value"] = round12(report.p_value);
    j["reject"] = report.reject;
    j["level"] = round12(report.level);
    j["score"] = to_string(report.score_kind);
    j["n_effective"] = report.n_effective;
    j["warnings"] = report.warnings;
    j["s_n"] = vec_json(report.s_n);
    j["q_condition"] = round12(report.q_condition);
    return j;
}

nlohmann::json to_json(const StudyReport& report) {
    const SimulationConfig& cfg = report.config;
    nlohmann::json c;
    c["n"] = cfg.n;
    c["s"] = cfg.s;
    c["p"] = cfg.p;
    c["phi0"] = round12(cfg.phi0);
    c["phi"] = vec_json(cfg.phi);
    c["beta0"] = round12(cfg.beta0);
    c["beta_x"] = vec_json(cfg.beta_x);
    c["innovation"] = cfg.innovation.describe();
    c["design"] = to_string(cfg.design_gen);
    if (cfg.design_gen == DesignGenerator::FixedMatrix) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index t = 0; t < cfg.fixed_design.rows(); ++t) {
            rows.push_back(vec_json(cfg.fixed_design.row(t).transpose()));
        }
        c["fixed_design"] = rows;
    }
    c["score"] = to_string(cfg.score_kind);
    c["level"] = round12(cfg.level);
    c["replications"] = cfg.replications;
    c["seed"] = cfg.seed;
    c["burn_in"] = cfg.burn_in;

    nlohmann::json j;
    j["config"] = c;
    j["rejection_rate"] = round12(report.rejection_rate);
    j["predicted"] = round12(report.predicted);
    j["eta2"] = round12(report.eta2);
    j["mc_stderr"] = round12(report.mc_stderr);
    j["ks_distance_to_chi2"] = round12(report.ks_distance_to_chi2);
    j["failures"] = report.failures;
    j["p_values"] = vec_json(report.p_values);
    j["statistics"] = vec_json(report.statistics);
    return j;
}

nlohmann::json to_json(const RankScorePath& path) {
    nlohmann::json j;
    j["breakpoints"] = vec_json(path.breakpoints);
    nlohmann::json cols = nlohmann::json::array();
    for (Eigen::Index k = 0; k < path.breakpoints.size(); ++k) {
        cols.push_back(vec_json(path.node_values.col(k)));
    }
    j["scores"] = cols;
    return j;
}

StudyReport study_report_from_json(const nlohmann::json& j) {
    StudyReport report;
    const auto& c = j.at("config");
    SimulationConfig cfg;
    cfg.n = c.at("n").get<Eigen::Index>();
    cfg.s = c.at("s").get<Eigen::Index>();
    cfg.p = c.at("p").get<Eigen::Index>();
    cfg.phi0 = c.at("phi0").get<double>();
    cfg.phi = vec_from_json(c.at("phi"));
    cfg.beta0 = c.at("beta0").get<double>();
    cfg.beta_x = vec_from_json(c.at("beta_x"));
    cfg.innovation = InnovationDistribution::parse(c.at("innovation").get<std::string>());
    cfg.design_gen = design_generator_from_string(c.at("design").get<std::string>());
    if (cfg.design_gen == DesignGenerator::FixedMatrix) {
        const auto& rows = c.at("fixed_design");
        cfg.fixed_design.resize(static_cast<Eigen::Index>(rows.size()), cfg.s);
        Eigen::Index t = 0;
        for (const auto& row : rows) {
            cfg.fixed_design.row(t++) = vec_from_json(row).transpose();
        }
    }
    cfg.score_kind = score_kind_from_string(c.at("score").get<std::string>());
    cfg.level = c.at("level").get<double>();
    cfg.replications = c.at("replications").get<Eigen::Index>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    cfg.burn_in = c.at("burn_in").get<Eigen::Index>();
    report.config = cfg;
    report.rejection_rate = j.at("rejection_rate").get<double>();
    report.predicted = j.at("predicted").get<double>();
    report.eta2 = j.at("eta2").get<double>();
    report.mc_stderr = j.at("mc_stderr").get<double>();
    report.ks_distance_to_chi2 = j.at("ks_distance_to_chi2").get<double>();
    report.failures = j.at("failures").get<Eigen::Index>();
    report.p_values = vec_from_json(j.at("p_values"));
    report.statistics = vec_from_json(j.at("statistics"));
    return report;
}

std::string to_csv(const TestReport& report) {
    std::ostringstream os;
    os << "key,value\n";
    os << "statistic," << num12(report.statistic) << "\n";
    os << "dof," << report.dof << "\n";
    os << "p_value," << num12(report.p_value) << "\n";
    os << "reject," << (report.reject ? "true" : "false") << "\n";
    os << "level," << num12(report.level) << "\n";
    os << "score," << to_string(report.score_kind) << "\n";
    os << "n_effective," << report.n_effective << "\n";
    os << "q_condition," << num12(report.q_condition) << "\n";
    for (Eigen::Index i = 0; i < report.s_n.size(); ++i) {
        os << "s_n_" << (i + 1) << "," << num12(report.s_n[i]) << "\n";
    }
    for (std::size_t i = 0; i < report.warnings.size(); ++i) {
        os << "warning_" << (i + 1) << "," << csv_quote(report.warnings[i]) << "\n";
    }
    return os.str();
}

std::string to_csv(const StudyReport& report) {
    std::ostringstream os;
    os << "key,value\n";
    os << "rejection_rate," << num12(report.rejection_rate) << "\n";
    os << "predicted," << num12(report.predicted) << "\n";
    os << "eta2," << num12(report.eta2) << "\n";
    os << "mc_stderr," << num12(report.mc_stderr) << "\n";
    os << "ks_distance_to_chi2," << num12(report.ks_distance_to_chi2) << "\n";
    os << "failures," << report.failures << "\n";
    for (Eigen::Index i = 0; i < report.p_values.size(); ++i) {
        os << "p_value_" << (i + 1) << "," << num12(report.p_values[i]) << "\n";
    }
    for (Eigen::Index i = 0; i < report.statistics.size(); ++i) {
        os << "statistic_" << (i + 1) << "," << num12(report.statistics[i]) << "\n";
    }
    return os.str();
}

std::string to_csv(const RankScorePath& path) {
    std::ostringstream os;
    os << "alpha";
    for (Eigen::Index t = 0; t < path.n(); ++t) os << ",a" << (t + 1);
    os << "\n";
    for (Eigen::Index k = 0; k < path.breakpoints.size(); ++k) {
        os << num12(path.breakpoints[k]);
        for (Eigen::Index t = 0; t < path.n(); ++t) {
            os << "," << num12(path.node_values(t, k));
        }
        os << "\n";
    }
    return os.str();
}

void write_text(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text;
        if (!std::cout) throw IoError("write_report: failed writing to stdout");
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("write_report: cannot open \"" + path + "\" for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write_report: failed writing \"" + path + "\"");
}

void write_report(const TestReport& report, ReportFormat format, const std::string& path) {
    write_text(format == ReportFormat::Json ? to_json(report).dump(2) + "\n"
                                            : to_csv(report),
               path);
}

void write_report(const StudyReport& report, ReportFormat format, const std::string& path) {
    write_text(format == ReportFormat::Json ? to_json(report).dump(2) + "\n"
                                            : to_csv(report),
               path);
}

void write_report(const RankScorePath& path_data, ReportFormat format,
                  const std::string& path) {
    write_text(format == ReportFormat::Json ? to_json(path_data).dump(2) + "\n"
                                            : to_csv(path_data),
               path);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_number_list(const std::string& value, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) {
            throw ConfigError("config: bad number \"" + tok + "\" for key " + key);
        }
        out.push_back(v);
    }
    return out;
}

long parse_integer(const std::string& value, const std::string& key) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end != value.c_str() + value.size()) {
        throw ConfigError("config: bad integer \"" + value + "\" for key " + key);
    }
    return v;
}

}  // namespace

SimulationConfig parse_study_config(std::istream& in) {
    SimulationConfig cfg;
    cfg.phi.resize(0);
    cfg.beta_x.resize(0);
    bool have_n = false, have_s = false, have_p = false;
    std::string design_file;

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(line_no) +
                              " is not of the form key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw ConfigError("config: empty value for key " + key);
        }

        if (key == "n") {
            cfg.n = parse_integer(value, key);
            have_n = true;
        } else if (key == "s") {
            cfg.s = parse_integer(value, key);
            have_s = true;
        } else if (key == "p") {
            cfg.p = parse_integer(value, key);
            have_p = true;
        } else if (key == "phi") {
            const auto v = parse_number_list(value, key);
            cfg.phi = Eigen::Map<const Eigen::VectorXd>(v.data(),
                                                        static_cast<Eigen::Index>(v.size()));
        } else if (key == "phi0") {
            cfg.phi0 = parse_number_list(value, key).at(0);
        } else if (key == "beta0") {
            cfg.beta0 = parse_number_list(value, key).at(0);
        } else if (key == "beta_x") {
            const auto v = parse_number_list(value, key);
            cfg.beta_x = Eigen::Map<const Eigen::VectorXd>(
                v.data(), static_cast<Eigen::Index>(v.size()));
        } else if (key == "innovation") {
            cfg.innovation = InnovationDistribution::parse(value);
        } else if (key == "design") {
            cfg.design_gen = design_generator_from_string(value);
        } else if (key == "design_file") {
            design_file = value;
        } else if (key == "score") {
            cfg.score_kind = score_kind_from_string(value);
        } else if (key == "level") {
            cfg.level = parse_number_list(value, key).at(0);
        } else if (key == "replications") {
            cfg.replications = parse_integer(value, key);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(std::strtoull(value.c_str(), nullptr, 10));
        } else if (key == "burn_in") {
            cfg.burn_in = parse_integer(value, key);
        } else {
            throw ConfigError("config: unknown key \"" + key + "\"");
        }
    }

    if (!have_n || !have_s || !have_p) {
        throw ConfigError("config: keys n, s, and p are required");
    }
    if (cfg.phi.size() == 0 && cfg.p > 0) {
        throw ConfigError("config: phi is required when p > 0");
    }
    if (cfg.beta_x.size() == 0) cfg.beta_x = Eigen::VectorXd::Zero(cfg.s);
    if (cfg.design_gen == DesignGenerator::FixedMatrix) {
        if (design_file.empty()) {
            throw ConfigError("config: design = fixed_matrix requires design_file");
        }
        const LabeledTable t = read_table(design_file);
        cfg.fixed_design = t.values;
    }
    validate_config(cfg);
    return cfg;
}

SimulationConfig read_study_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_study_config: cannot open \"" + path + "\"");
    return parse_study_config(in);
}

namespace {

void attach_common_test_options(CLI::App* cmd, TestCommand& tc, std::string& score_name,
                                std::string& format_name, std::string& delim_name,
                                std::string& presample_csv) {
    cmd->add_option("--data", tc.data_path, "input table path")->required();
    cmd->add_option("--response", tc.response, "response column name")->required();
    cmd->add_option("--regressors", tc.regressors, "comma separated regressor columns")
        ->required()
        ->delimiter(',');
    cmd->add_option("--ar-order", tc.ar_order, "autoregression order p")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--score", score_name, "wilcoxon | van_der_waerden | sign");
    cmd->add_option("--level", tc.level, "significance level in (0,1)")
        ->check(CLI::Range(0.0, 1.0).description("(0,1)"));
    cmd->add_option("--presample", presample_csv,
                    "comma separated presample values (switches policy to explicit)");
    cmd->add_option("--output", tc.output, "output path or - for stdout");
    cmd->add_option("--format", format_name, "json | csv");
    cmd->add_option("--delimiter", delim_name, "comma | tab");
    cmd->add_flag("--timestamp", tc.timestamp, "add a generated_at field to the report");
}

char delimiter_from_name(const std::string& name) {
    if (name == "comma") return ',';
    if (name == "tab") return '\t';
    throw UsageError("unknown delimiter \"" + name + "\" (expected comma or tab)");
}

}  // namespace

Command parse_cli(const std::vector<std::string>& argv) {
    CLI::App app{"nonparametric no-regression tests under nuisance autoregression"};
    app.require_subcommand(1);

    TestCommand tc;
    std::string tc_score = "wilcoxon", tc_format = "json", tc_delim = "comma";
    std::string tc_presample;
    CLI::App* test_cmd = app.add_subcommand("test", "run the rank-score test on a data file");
    attach_common_test_options(test_cmd, tc, tc_score, tc_format, tc_delim, tc_presample);

    SimulateCommand sc;
    std::string sc_format = "json";
    CLI::App* sim_cmd = app.add_subcommand("simulate", "run a Monte Carlo study");
    sim_cmd->add_option("--config", sc.config_path, "study configuration file")->required();
    sim_cmd->add_option("--output", sc.output, "output path or - for stdout");
    sim_cmd->add_option("--format", sc_format, "json | csv");
    sim_cmd->add_option("--threads", sc.threads, "worker threads (0 = hardware)")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_flag("--timestamp", sc.timestamp, "add a generated_at field to the report");

    ScoresCommand xc;
    std::string xc_format = "csv", xc_delim = "comma", xc_presample;
    CLI::App* scores_cmd =
        app.add_subcommand("scores", "dump the rank-score path for a response series");
    scores_cmd->add_option("--data", xc.data_path, "input table path")->required();
    scores_cmd->add_option("--response", xc.response, "response column name")->required();
    scores_cmd->add_option("--ar-order", xc.ar_order, "autoregression order p")
        ->check(CLI::NonNegativeNumber);
    scores_cmd->add_option("--presample", xc_presample,
                           "comma separated presample values (switches policy to explicit)");
    scores_cmd->add_option("--output", xc.output, "output path or - for stdout");
    scores_cmd->add_option("--format", xc_format, "json | csv");
    scores_cmd->add_option("--delimiter", xc_delim, "comma | tab");

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\n\n" + app.help());
    }

    try {
        if (test_cmd->parsed()) {
            tc.score = score_kind_from_string(tc_score);
            tc.format = report_format_from_string(tc_format);
            tc.delimiter = delimiter_from_name(tc_delim);
            if (!tc_presample.empty()) {
                tc.policy = PresamplePolicy::Explicit;
                tc.presample = parse_number_list(tc_presample, "--presample");
            }
            if (!(tc.level > 0.0 && tc.level < 1.0)) {
                throw UsageError("--level must lie strictly inside (0,1)");
            }
            return tc;
        }
        if (sim_cmd->parsed()) {
            sc.format = report_format_from_string(sc_format);
            return sc;
        }
        xc.format = report_format_from_string(xc_format);
        xc.delimiter = delimiter_from_name(xc_delim);
        if (!xc_presample.empty()) {
            xc.presample = parse_number_list(xc_presample, "--presample");
        }
        return xc;
    } catch (const UsageError&) {
        throw;
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
}

}  // namespace ars
