#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dafnn/errors.hpp"
#include "dafnn/experiment.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            seeds.push_back(std::stoull(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw dafnn::ConfigError("invalid seed list entry: " + item);
        }
    }
    if (seeds.empty()) throw dafnn::ConfigError("seed list is empty");
    return seeds;
}

void print_report(const dafnn::RunReport& report) {
    std::cout << "case=" << dafnn::case_name(report.config.case_id)
              << " method=" << dafnn::method_name(report.config.method) << "\n";
    std::cout << "seed      rmse_train    r2_train    rmse_val      r2_val\n";
    char line[160];
    for (const auto& sr : report.seeds) {
        std::snprintf(line, sizeof line, "%-8llu %11.6f %11.6f %11.6f %11.6f\n",
                      static_cast<unsigned long long>(sr.seed), sr.rmse_train, sr.r2_train,
                      sr.rmse_val, sr.r2_val);
        std::cout << line;
    }
    std::snprintf(line, sizeof line, "%-8s %11.6f %11.6f %11.6f %11.6f\n", "median",
                  report.median.rmse_train, report.median.r2_train, report.median.rmse_val,
                  report.median.r2_val);
    std::cout << line;
    if (report.config.method == dafnn::Method::Esmda) {
        for (int it = 1; it <= report.config.esmda.n_i; ++it) {
            std::snprintf(line, sizeof line, "iteration %d median rmse_val %11.6f\n", it,
                          dafnn::iteration_median_rmse_val(report, it));
            std::cout << line;
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-free and gradient training of small regression networks"};
    app.require_subcommand(1);

    std::string case_arg;
    std::string method_arg;
    std::string seeds_arg = "1,2,3,4,5";
    std::string out_arg;
    std::string config_arg;
    CLI::App* train = app.add_subcommand("train", "Train one case with one method");
    train->add_option("--case", case_arg, "sine or mexican-hat")->required();
    train->add_option("--method", method_arg, "gd, enkf or esmda")->required();
    train->add_option("--seeds", seeds_arg, "comma-separated seed list");
    train->add_option("--out", out_arg, "output directory (default out/<case>-<method>)");
    train->add_option("--config", config_arg, "flat key=value config file");

    std::string repro_out = "paper_out";
    CLI::App* repro = app.add_subcommand(
        "reproduce-paper", "Run all six case/method cells with defaults and summarize");
    repro->add_option("--out", repro_out, "output root directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            dafnn::RunConfig config;
            config.case_id = dafnn::parse_case(case_arg);
            config.method = dafnn::parse_method(method_arg);
            config.seeds = parse_seeds(seeds_arg);
            if (!config_arg.empty()) dafnn::apply_config_file(config, config_arg);
            config.out_dir = out_arg.empty()
                                 ? "out/" + dafnn::case_name(config.case_id) + "-" +
                                       dafnn::method_name(config.method)
                                 : out_arg;
            const dafnn::RunReport report = dafnn::run_experiment(config);
            print_report(report);
            std::cout << "artifacts written to " << config.out_dir << "\n";
        } else {
            std::cout << dafnn::reproduce_paper(repro_out);
            std::cout << "artifacts written to " << repro_out << "\n";
        }
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
