#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ars/rank_scores.hpp"
#include "ars/simulation.hpp"
#include "ars/test_engine.hpp"

namespace ars {

enum class ReportFormat { Json, Csv };

ReportFormat report_format_from_string(const std::string& name);

/// Parsed command line. Defaults: score = wilcoxon, level = 0.05,
/// format = json, presample policy = consume-head, output = "-" (stdout).
struct TestCommand {
    std::string data_path;
    std::string response;
    std::vector<std::string> regressors;
    Eigen::Index ar_order = 0;
    ScoreKind score = ScoreKind::Wilcoxon;
    double level = 0.05;
    PresamplePolicy policy = PresamplePolicy::ConsumeHead;
    std::vector<double> presample;  ///< used when policy == Explicit
    std::string output = "-";
    ReportFormat format = ReportFormat::Json;
    char delimiter = ',';
    bool timestamp = false;  ///< opt in to a generated_at field
};

struct SimulateCommand {
    std::string config_path;
    std::string output = "-";
    ReportFormat format = ReportFormat::Json;
    int threads = 1;
    bool timestamp = false;
};

struct ScoresCommand {
    std::string data_path;
    std::string response;
    Eigen::Index ar_order = 0;
    std::string output = "-";
    ReportFormat format = ReportFormat::Csv;
    std::vector<double> presample;
    char delimiter = ',';
};

using Command = std::variant<TestCommand, SimulateCommand, ScoresCommand>;

/// Strict parse of the argument list (program name excluded). Unknown flags
/// are rejected. Throws UsageError carrying the offending token and a usage
/// synopsis; callers exit with status 2.
Command parse_cli(const std::vector<std::string>& argv);

/// JSON encodings. Numbers are rounded to 12 significant digits before
/// serialization, so a written report re-reads equal field by field.
nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const StudyReport& report);
nlohmann::json to_json(const RankScorePath& path);
StudyReport study_report_from_json(const nlohmann::json& j);

std::string to_csv(const TestReport& report);
std::string to_csv(const StudyReport& report);
std::string to_csv(const RankScorePath& path);

/// Write raw text to a file or to stdout when path is "-". Throws IoError.
void write_text(const std::string& text, const std::string& path);

/// Serialize to a file or to stdout when path is "-". Throws IoError on
/// filesystem failure; callers exit with status 1.
void write_report(const TestReport& report, ReportFormat format, const std::string& path);
void write_report(const StudyReport& report, ReportFormat format, const std::string& path);
void write_report(const RankScorePath& path_data, ReportFormat format,
                  const std::string& path);

/// Parse the key = value study configuration (schema documented in the
/// README). Unknown keys are errors.
SimulationConfig parse_study_config(std::istream& in);
SimulationConfig read_study_config(const std::string& path);

}  // namespace ars
