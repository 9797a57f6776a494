#include "sno/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace sno {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

long long default_fes_max(int dimension) {
    return dimension >= 20 ? 1000000 : 200000;
}

namespace {

std::string trimmed(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    throw std::invalid_argument("config key '" + key + "' expects true/false");
}

}  // namespace

void apply_config_file(const fs::path& path, ExperimentSpec& spec) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path.string());
    }
    SnoConfig& cfg = spec.base_config;
    bool saw_n_s_init = false;
    bool saw_n_s_end = false;
    bool saw_n_x_init = false;
    bool saw_n_x_end = false;
    std::optional<double> bounds_lower;
    std::optional<double> bounds_upper;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) {
            line.erase(comment);
        }
        const std::string text = trimmed(line);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": expected 'key = value'");
        }
        const std::string key = trimmed(text.substr(0, eq));
        const std::string value = trimmed(text.substr(eq + 1));
        try {
            if (key == "n_s_init") {
                cfg.n_s_init = std::stoi(value);
                saw_n_s_init = true;
            } else if (key == "n_s_end") {
                cfg.n_s_end = std::stoi(value);
                saw_n_s_end = true;
            } else if (key == "n_x_init") {
                cfg.n_x_init = std::stoi(value);
                saw_n_x_init = true;
            } else if (key == "n_x_end") {
                cfg.n_x_end = std::stoi(value);
                saw_n_x_end = true;
            } else if (key == "n_p") {
                cfg.n_p = std::stoi(value);
            } else if (key == "alpha_init") {
                cfg.alpha_init = std::stod(value);
            } else if (key == "beta_init") {
                cfg.beta_init = std::stod(value);
            } else if (key == "c_s") {
                cfg.c_s = std::stod(value);
            } else if (key == "c_x") {
                cfg.c_x = std::stod(value);
            } else if (key == "rho_max") {
                cfg.rho_max = std::stod(value);
            } else if (key == "n_a_max") {
                cfg.n_a_max = std::stoi(value);
            } else if (key == "tournament_size") {
                cfg.tournament_size = std::stoi(value);
            } else if (key == "fes_max") {
                spec.fes_max = std::stoll(value);
            } else if (key == "error_threshold") {
                cfg.error_threshold = std::stod(value);
            } else if (key == "seed") {
                spec.seed_base = std::stoull(value);
            } else if (key == "t_max") {
                cfg.t_max = std::stoll(value);
            } else if (key == "widening_region_schedule") {
                cfg.widening_region_schedule = parse_bool(value, key);
            } else if (key == "adapt_control_params") {
                cfg.adapt_control_params = parse_bool(value, key);
            } else if (key == "sample_every") {
                cfg.sample_every = std::stoll(value);
            } else if (key == "bounds_lower") {
                bounds_lower = std::stod(value);
            } else if (key == "bounds_upper") {
                bounds_upper = std::stod(value);
            } else {
                throw std::invalid_argument("unknown config key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": bad value for '" + key + "'");
        }
    }

    if (saw_n_s_init) {
        if (!saw_n_s_end) {
            cfg.n_s_end = cfg.n_s_init / 5;
        }
        if (!saw_n_x_init) {
            cfg.n_x_init = cfg.n_s_init / 10;
        }
        if (!saw_n_x_end) {
            cfg.n_x_end = cfg.n_s_init / 5;
        }
    }
    if (bounds_lower.has_value() != bounds_upper.has_value()) {
        throw std::invalid_argument("bounds_lower and bounds_upper must be set together");
    }
    if (bounds_lower) {
        spec.bounds = std::make_pair(*bounds_lower, *bounds_upper);
    }
}

namespace {

void write_convergence_csv(const fs::path& path, const RunRecord& record) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "fes,best_error,n_s,n_x,diversity,xpl_pct,xpt_pct\n";
    for (const ConvergenceSample& s : record.samples) {
        out << s.fes << ',' << format_double(s.best_error) << ',' << s.n_s << ',' << s.n_x << ','
            << format_double(s.diversity) << ',' << format_double(s.xpl_pct) << ','
            << format_double(s.xpt_pct) << '\n';
    }
}

void write_net_csv(const fs::path& path, const NetSnapshot& snapshot, int dimension) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "kind,point_id,grid_row,grid_col";
    for (int j = 0; j < dimension; ++j) {
        out << ",x" << j;
    }
    out << ",objective\n";
    auto write_coords = [&out](const std::vector<double>& position, double objective) {
        for (const double c : position) {
            out << ',' << format_double(c);
        }
        out << ',' << format_double(objective) << '\n';
    };
    for (std::size_t i = 0; i < snapshot.points.size(); ++i) {
        const ElasticPoint& p = snapshot.points[i];
        out << "elastic," << i << ',' << p.grid_row << ',' << p.grid_col;
        write_coords(p.position, p.objective);
    }
    for (std::size_t i = 0; i < snapshot.explorer_positions.size(); ++i) {
        out << "explorer," << i << ",-1,-1";
        write_coords(snapshot.explorer_positions[i], snapshot.explorer_objectives[i]);
    }
    for (std::size_t i = 0; i < snapshot.miner_positions.size(); ++i) {
        out << "miner," << i << ",-1,-1";
        write_coords(snapshot.miner_positions[i], snapshot.miner_objectives[i]);
    }
}

ordered_json config_json(const SnoConfig& cfg, const Problem& problem) {
    ordered_json j;
    j["n_s_init"] = cfg.n_s_init;
    j["n_s_end"] = cfg.n_s_end;
    j["n_x_init"] = cfg.n_x_init;
    j["n_x_end"] = cfg.n_x_end;
    j["n_p"] = cfg.n_p;
    j["alpha_init"] = cfg.alpha_init;
    j["beta_init"] = cfg.beta_init;
    j["c_s"] = cfg.c_s;
    j["c_x"] = cfg.c_x;
    j["rho_max"] = cfg.rho_max;
    j["n_a_max"] = cfg.n_a_max;
    j["tournament_size"] = cfg.tournament_size;
    j["fes_max"] = cfg.fes_max;
    j["error_threshold"] = cfg.error_threshold;
    j["t_max"] = cfg.t_max;
    j["widening_region_schedule"] = cfg.widening_region_schedule;
    j["adapt_control_params"] = cfg.adapt_control_params;
    j["sample_every"] = cfg.sample_every;
    j["snapshot_fes"] = cfg.snapshot_fes;
    j["bounds_lower"] = problem.lower_bounds.front();
    j["bounds_upper"] = problem.upper_bounds.front();
    return j;
}

constexpr const char* kPhaseNames[kEvalPhaseCount] = {
    "init", "region_search", "point_search", "net_adjust", "population_adjust"};

void write_results_json(const fs::path& path, const ExperimentSpec& spec, const SnoConfig& cfg,
                        const Problem& problem, const std::vector<RunRecord>& records) {
    ordered_json j;
    j["algorithm"] = "sno";
    j["problem"] = problem.name;
    j["dimension"] = problem.dimension;
    j["fes_max"] = cfg.fes_max;
    j["trials"] = static_cast<int>(records.size());
    j["seed_base"] = spec.seed_base;
    j["config"] = config_json(cfg, problem);
    ordered_json results = ordered_json::array();
    for (std::size_t t = 0; t < records.size(); ++t) {
        const RunRecord& record = records[t];
        ordered_json r;
        r["trial"] = t;
        r["seed"] = record.seed;
        r["fes_used"] = record.fes_used;
        r["iterations"] = record.iterations;
        r["final_error"] = record.final_error;
        r["final_objective"] = record.final_objective;
        ordered_json counts;
        for (int phase = 0; phase < kEvalPhaseCount; ++phase) {
            counts[kPhaseNames[phase]] = record.eval_counts[static_cast<std::size_t>(phase)];
        }
        r["eval_counts"] = counts;
        r["best_point"] = record.best_point;
        std::vector<long long> capture_fes;
        for (const NetSnapshot& snapshot : record.snapshots) {
            capture_fes.push_back(snapshot.fes);
        }
        r["snapshot_fes"] = capture_fes;
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

std::vector<RunRecord> run_trials(const SnoConfig& cfg, const Problem& problem, int trials,
                                  std::uint64_t seed_base, int jobs) {
    std::vector<RunRecord> records(static_cast<std::size_t>(trials));
    if (jobs <= 1 || trials <= 1) {
        for (int t = 0; t < trials; ++t) {
            SnoConfig trial_cfg = cfg;
            trial_cfg.seed = seed_base + static_cast<std::uint64_t>(t);
            records[static_cast<std::size_t>(t)] = SnoOptimizer(trial_cfg, problem).run();
        }
        return records;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(jobs));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
                    SnoConfig trial_cfg = cfg;
                    trial_cfg.seed = seed_base + static_cast<std::uint64_t>(t);
                    records[static_cast<std::size_t>(t)] = SnoOptimizer(trial_cfg, problem).run();
                }
            } catch (...) {
                failures[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (std::thread& worker : workers) {
        worker.join();
    }
    for (const std::exception_ptr& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
    return records;
}

}  // namespace

int run_experiment(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
    std::vector<fs::path> created;
    try {
        if (spec.problems.empty() || spec.dimensions.empty()) {
            throw std::invalid_argument("at least one problem and one dimension required");
        }
        if (spec.trials < 1) {
            throw std::invalid_argument("trials must be >= 1");
        }
        if (spec.jobs < 1) {
            throw std::invalid_argument("jobs must be >= 1");
        }
        fs::create_directories(spec.out_dir);

        for (const std::string& name : spec.problems) {
            for (const int dim : spec.dimensions) {
                const Problem problem =
                    spec.bounds ? make_problem(name, dim, spec.bounds->first, spec.bounds->second)
                                : make_problem(name, dim);
                SnoConfig cfg = spec.base_config;
                cfg.fes_max = spec.fes_max.value_or(default_fes_max(dim));
                cfg.snapshot_fes = spec.snapshots;
                cfg.validate();

                const auto records =
                    run_trials(cfg, problem, spec.trials, spec.seed_base, spec.jobs);

                const std::string stem = problem.name + "_" + std::to_string(dim);
                for (int t = 0; t < spec.trials; ++t) {
                    const RunRecord& record = records[static_cast<std::size_t>(t)];
                    const fs::path convergence =
                        spec.out_dir / ("convergence_" + stem + "_" + std::to_string(t) + ".csv");
                    created.push_back(convergence);
                    write_convergence_csv(convergence, record);
                    for (const NetSnapshot& snapshot : record.snapshots) {
                        const fs::path net =
                            spec.out_dir / ("net_" + stem + "_" + std::to_string(t) + "_" +
                                            std::to_string(snapshot.checkpoint) + ".csv");
                        created.push_back(net);
                        write_net_csv(net, snapshot, dim);
                    }
                }
                const fs::path results = spec.out_dir / ("results_" + stem + ".json");
                created.push_back(results);
                write_results_json(results, spec, cfg, problem, records);
                out << stem << ": " << spec.trials << " trial(s), best error "
                    << format_double(
                           std::min_element(records.begin(), records.end(),
                                            [](const RunRecord& a, const RunRecord& b) {
                                                return a.final_error < b.final_error;
                                            })
                               ->final_error)
                    << "\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        for (const fs::path& path : created) {
            std::error_code ec;
            fs::remove(path, ec);
        }
        err << "error: " << e.what() << "\n";
        return dynamic_cast<const std::invalid_argument*>(&e) != nullptr ? 1 : 2;
    }
}

namespace {

struct LoadedAlgorithm {
    std::string label;
    ResultTable table;
    std::map<std::string, fs::path> file_by_function;
};

LoadedAlgorithm load_results_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw std::runtime_error("not a directory: " + dir.string());
    }
    LoadedAlgorithm loaded;
    fs::path normalized = dir;
    normalized.make_preferred();
    loaded.label = normalized.filename().string();
    if (loaded.label.empty() || loaded.label == ".") {
        loaded.label = fs::absolute(normalized).parent_path().filename().string();
    }
    loaded.table.algorithm = loaded.label;

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string filename = entry.path().filename().string();
        if (entry.is_regular_file() && filename.starts_with("results_") &&
            filename.ends_with(".json")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw std::runtime_error("no results_*.json files in " + dir.string());
    }
    for (const fs::path& file : files) {
        std::ifstream in(file);
        ordered_json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw std::runtime_error(file.string() + ": " + e.what());
        }
        const std::string function =
            j.at("problem").get<std::string>() + "_" + std::to_string(j.at("dimension").get<int>());
        if (loaded.table.errors_by_function.count(function) != 0) {
            throw std::runtime_error("duplicate function " + function + " in " + file.string() +
                                     " and " + loaded.file_by_function.at(function).string());
        }
        std::vector<double> errors;
        for (const auto& r : j.at("results")) {
            errors.push_back(r.at("final_error").get<double>());
        }
        if (errors.empty()) {
            throw std::runtime_error(file.string() + ": no trials");
        }
        loaded.table.errors_by_function.emplace(function, std::move(errors));
        loaded.file_by_function.emplace(function, file);
    }
    return loaded;
}

void validate_comparable(const std::vector<LoadedAlgorithm>& algorithms) {
    const LoadedAlgorithm& first = algorithms.front();
    for (std::size_t i = 1; i < algorithms.size(); ++i) {
        const LoadedAlgorithm& other = algorithms[i];
        for (const auto& [function, errors] : first.table.errors_by_function) {
            const auto it = other.table.errors_by_function.find(function);
            if (it == other.table.errors_by_function.end()) {
                throw std::runtime_error("function " + function + " (" +
                                         first.file_by_function.at(function).string() +
                                         ") is missing under " + other.label);
            }
            if (it->second.size() != errors.size()) {
                throw std::runtime_error(
                    "trial count mismatch on " + function + ": " +
                    first.file_by_function.at(function).string() + " has " +
                    std::to_string(errors.size()) + ", " +
                    other.file_by_function.at(function).string() + " has " +
                    std::to_string(it->second.size()));
            }
        }
        for (const auto& [function, errors] : other.table.errors_by_function) {
            if (first.table.errors_by_function.count(function) == 0) {
                throw std::runtime_error("function " + function + " (" +
                                         other.file_by_function.at(function).string() +
                                         ") is missing under " + first.label);
            }
        }
    }
}

}  // namespace

int run_compare(const CompareOptions& options, std::ostream& out, std::ostream& err) {
    try {
        if (options.result_dirs.size() < 2) {
            throw std::invalid_argument("compare needs at least two result directories");
        }
        if (!(options.significance > 0.0) || options.significance >= 1.0) {
            throw std::invalid_argument("significance must lie in (0, 1)");
        }
        std::vector<LoadedAlgorithm> algorithms;
        algorithms.reserve(options.result_dirs.size());
        for (const fs::path& dir : options.result_dirs) {
            algorithms.push_back(load_results_dir(dir));
        }
        // Directory basenames label the algorithms; disambiguate repeats.
        std::map<std::string, int> label_uses;
        for (LoadedAlgorithm& algorithm : algorithms) {
            const int uses = ++label_uses[algorithm.label];
            if (uses > 1) {
                algorithm.label += "#" + std::to_string(uses);
                algorithm.table.algorithm = algorithm.label;
            }
        }
        validate_comparable(algorithms);

        std::vector<ResultTable> tables;
        tables.reserve(algorithms.size());
        for (const LoadedAlgorithm& algorithm : algorithms) {
            tables.push_back(algorithm.table);
        }
        const auto avg_ranks = average_ranks(tables, RankMode::Avg);
        const auto best_ranks = average_ranks(tables, RankMode::Best);

        fs::create_directories(options.out_dir);
        {
            std::ofstream ranks_out(options.out_dir / "ranks.csv");
            if (!ranks_out) {
                throw std::runtime_error("cannot write ranks.csv");
            }
            ranks_out << "algorithm,mode,mean_rank\n";
            for (const auto& [algorithm, rank] : avg_ranks) {
                ranks_out << algorithm << ",avg," << format_double(rank) << '\n';
            }
            for (const auto& [algorithm, rank] : best_ranks) {
                ranks_out << algorithm << ",best," << format_double(rank) << '\n';
            }
        }

        std::ofstream wilcoxon_out(options.out_dir / "wilcoxon.csv");
        if (!wilcoxon_out) {
            throw std::runtime_error("cannot write wilcoxon.csv");
        }
        wilcoxon_out << "algorithm_pair,function,classification\n";
        out << "mean ranks (" << (options.console_mode == RankMode::Avg ? "avg" : "best")
            << " mode):\n";
        for (const auto& [algorithm, rank] :
             options.console_mode == RankMode::Avg ? avg_ranks : best_ranks) {
            out << "  " << algorithm << ": " << format_double(rank) << "\n";
        }
        for (std::size_t i = 0; i < algorithms.size(); ++i) {
            for (std::size_t j = i + 1; j < algorithms.size(); ++j) {
                const std::string pair = algorithms[i].label + " vs " + algorithms[j].label;
                int better = 0;
                int no_difference = 0;
                int worse = 0;
                for (const auto& [function, errors_a] :
                     algorithms[i].table.errors_by_function) {
                    const auto& errors_b = algorithms[j].table.errors_by_function.at(function);
                    const WilcoxonOutcome outcome =
                        options.paired
                            ? wilcoxon_classify_paired(errors_a, errors_b, options.significance)
                            : wilcoxon_classify(errors_a, errors_b, options.significance);
                    wilcoxon_out << pair << ',' << function << ',' << to_string(outcome) << '\n';
                    switch (outcome) {
                        case WilcoxonOutcome::Better:
                            ++better;
                            break;
                        case WilcoxonOutcome::Worse:
                            ++worse;
                            break;
                        default:
                            ++no_difference;
                            break;
                    }
                }
                out << pair << ": Better " << better << ", NoDifference " << no_difference
                    << ", Worse " << worse << "\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return dynamic_cast<const std::invalid_argument*>(&e) != nullptr ? 1 : 2;
    }
}

int write_snapshot_plotdata(const fs::path& net_csv, std::ostream& out, std::ostream& err) {
    try {
        if (net_csv.empty()) {
            err << "error: no snapshot file given\n";
            return 1;
        }
        std::ifstream in(net_csv);
        if (!in) {
            throw std::runtime_error("cannot open " + net_csv.string());
        }
        std::string header;
        if (!std::getline(in, header)) {
            throw std::runtime_error(net_csv.string() + ": empty file");
        }
        long long columns = std::count(header.begin(), header.end(), ',') + 1;
        const int dimension = static_cast<int>(columns) - 5;
        if (!header.starts_with("kind,point_id,grid_row,grid_col,") || dimension < 1) {
            throw std::runtime_error(net_csv.string() + ": not a net snapshot file");
        }
        const int emitted = std::min(dimension, 3);
        if (dimension > 3) {
            err << "warning: " << dimension
                << "-dimensional snapshot; emitting the first two coordinates only\n";
        }
        const int keep = dimension > 3 ? 2 : emitted;

        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            std::vector<std::string> fields;
            std::stringstream row(line);
            std::string field;
            while (std::getline(row, field, ',')) {
                fields.push_back(field);
            }
            if (static_cast<long long>(fields.size()) != columns) {
                throw std::runtime_error(net_csv.string() + ": malformed row '" + line + "'");
            }
            if (fields[0] != "elastic") {
                continue;
            }
            for (int j = 0; j < keep; ++j) {
                out << fields[static_cast<std::size_t>(4 + j)] << ' ';
            }
            out << fields.back() << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace sno
