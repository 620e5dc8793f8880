#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include "ars/errors.hpp"
#include "ars/report_io.hpp"

namespace {

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Deterministic output is the default; a timestamp appears only on request.
template <typename Report>
void emit(const Report& report, ars::ReportFormat format, const std::string& path,
          bool timestamp) {
    if (!timestamp) {
        ars::write_report(report, format, path);
        return;
    }
    if (format == ars::ReportFormat::Json) {
        nlohmann::json j = ars::to_json(report);
        j["generated_at"] = utc_now();
        ars::write_text(j.dump(2) + "\n", path);
    } else {
        ars::write_text(ars::to_csv(report) + "generated_at," + utc_now() + "\n", path);
    }
}

int run_test_command(const ars::TestCommand& cmd) {
    const ars::LabeledTable table = ars::read_table(cmd.data_path, cmd.delimiter);
    Eigen::VectorXd presample;
    if (cmd.policy == ars::PresamplePolicy::Explicit) {
        presample = Eigen::Map<const Eigen::VectorXd>(
            cmd.presample.data(), static_cast<Eigen::Index>(cmd.presample.size()));
    }
    const ars::Dataset d = ars::load_dataset(table, cmd.response, cmd.regressors,
                                             cmd.ar_order, cmd.policy, presample);
    const ars::TestReport report = ars::run_test(d, cmd.score, cmd.level);
    // Rejection is data, not failure: exit 0 either way.
    emit(report, cmd.format, cmd.output, cmd.timestamp);
    return 0;
}

int run_simulate_command(const ars::SimulateCommand& cmd) {
    const ars::SimulationConfig cfg = ars::read_study_config(cmd.config_path);
    const ars::StudyReport report = ars::run_study(cfg, cmd.threads);
    emit(report, cmd.format, cmd.output, cmd.timestamp);
    return 0;
}

int run_scores_command(const ars::ScoresCommand& cmd) {
    const ars::LabeledTable table = ars::read_table(cmd.data_path, cmd.delimiter);
    const bool explicit_presample = !cmd.presample.empty();
    Eigen::VectorXd presample;
    if (explicit_presample) {
        presample = Eigen::Map<const Eigen::VectorXd>(
            cmd.presample.data(), static_cast<Eigen::Index>(cmd.presample.size()));
    }
    // The path needs only the response series; a zero regressor block keeps
    // load_dataset's row accounting intact.
    ars::Dataset d;
    const Eigen::Index y_col = table.column(cmd.response);
    const Eigen::Index p = cmd.ar_order;
    Eigen::VectorXd y = table.values.col(y_col);
    if (explicit_presample) {
        if (presample.size() != p) {
            throw ars::DataError("scores: presample length must equal --ar-order");
        }
        d.presample = presample;
        d.response = y;
    } else {
        if (y.size() <= p + 1) {
            throw ars::DataError("scores: too few rows for --ar-order");
        }
        d.presample = y.head(p);
        d.response = y.tail(y.size() - p);
    }
    d.ar_order = p;
    d.regressors.resize(d.response.size(), 0);

    const ars::AutoregressionDesign ar = ars::build_ar_design(d);
    const ars::RankScorePath path = ars::solve_rank_score_path(ar);
    ars::write_report(path, cmd.format, cmd.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const ars::Command cmd = ars::parse_cli(args);
        if (std::holds_alternative<ars::TestCommand>(cmd)) {
            return run_test_command(std::get<ars::TestCommand>(cmd));
        }
        if (std::holds_alternative<ars::SimulateCommand>(cmd)) {
            return run_simulate_command(std::get<ars::SimulateCommand>(cmd));
        }
        return run_scores_command(std::get<ars::ScoresCommand>(cmd));
    } catch (const ars::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
