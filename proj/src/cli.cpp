#include "cdc/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "cdc/analysis.hpp"
#include "cdc/errors.hpp"
#include "cdc/simnet.hpp"
#include "cdc/terasort.hpp"

namespace cdc::cli {

namespace {

std::pair<int, int> parse_config_pair(const std::string& text) {
    auto sep = text.find(':');
    if (sep == std::string::npos) throw InvalidParams("expected K:r, got '" + text + "'");
    return {std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + 1))};
}

std::string cell_load(const LoadReport& row) {
    return row.feasible ? row.communication_load.to_decimal(2) : "-";
}

std::string cell_int(const LoadReport& row, std::int64_t LoadReport::* field) {
    return row.feasible ? std::to_string(row.*field) : "-";
}

void render_table(const std::vector<LoadReport>& rows, const std::string& format,
                  std::ostream& out) {
    const char* names[] = {"lmya", "kr", "flcd"};
    if (format == "csv") {
        out << "K,r,m";
        for (auto* n : names) out << "," << n << "_L," << n << "_N," << n << "_G";
        out << "\n";
    } else {
        out << "| K | r | m ";
        for (auto* n : names) out << "| " << n << " L | " << n << " N | " << n << " G ";
        out << "|\n|---|---|---";
        for (int i = 0; i < 3; ++i) out << "|---|---|---";
        out << "|\n";
    }
    for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
        const LoadReport& lmya = rows[i];
        std::string m = Rational(lmya.nodes, lmya.load).to_decimal(2);
        if (format == "csv") {
            out << lmya.nodes << "," << lmya.load << "," << m;
            for (std::size_t d = 0; d < 3; ++d)
                out << "," << cell_load(rows[i + d]) << "," << cell_int(rows[i + d], &LoadReport::files)
                    << "," << cell_int(rows[i + d], &LoadReport::groups);
            out << "\n";
        } else {
            out << "| " << lmya.nodes << " | " << lmya.load << " | " << m << " ";
            for (std::size_t d = 0; d < 3; ++d)
                out << "| " << cell_load(rows[i + d]) << " | "
                    << cell_int(rows[i + d], &LoadReport::files) << " | "
                    << cell_int(rows[i + d], &LoadReport::groups) << " ";
            out << "|\n";
        }
    }
}

std::string ratio_text(const Rational& r) {
    return r.to_string() + " (" + r.to_decimal(4) + ")";
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) values.push_back(std::stoll(item));
    return values;
}

std::string trimmed(const std::string& text) {
    auto begin = text.find_first_not_of(" \t\"");
    auto end = text.find_last_not_of(" \t\"\r");
    return begin == std::string::npos ? "" : text.substr(begin, end - begin + 1);
}

// `key = value` lines, same keys as the flags without the leading dashes.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw InvalidParams("cannot open config file " + path);
    std::map<std::string, std::string> values;
    std::string line;
    while (std::getline(file, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trimmed(line).empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParams("config line without '=': " + trimmed(line));
        values[trimmed(line.substr(0, eq))] = trimmed(line.substr(eq + 1));
    }
    return values;
}

struct SchemeFlags {
    std::string scheme;
    int nodes = 0;
    int load = 0;
    std::vector<std::int64_t> iv_sizes;
    std::vector<std::int64_t> file_counts;
    std::int64_t scale = 1;
    std::int64_t max_files = kDefaultFileLimit;
    std::uint64_t seed = 0;
    std::int64_t records = 100'000;
    std::string config_file;

    CLI::Option* opt_scheme = nullptr;
    CLI::Option* opt_nodes = nullptr;
    CLI::Option* opt_load = nullptr;
    CLI::Option* opt_iv_sizes = nullptr;
    CLI::Option* opt_files = nullptr;
    CLI::Option* opt_scale = nullptr;
    CLI::Option* opt_max_files = nullptr;
    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_records = nullptr;

    // Config file fills in whatever the command line left unset.
    void apply_config() {
        if (config_file.empty()) return;
        for (const auto& [key, value] : read_config_file(config_file)) {
            if (key == "scheme" && opt_scheme->count() == 0)
                scheme = value;
            else if (key == "nodes" && opt_nodes->count() == 0)
                nodes = std::stoi(value);
            else if (key == "load" && opt_load->count() == 0)
                load = std::stoi(value);
            else if (key == "iv-sizes" && opt_iv_sizes->count() == 0)
                iv_sizes = parse_int_list(value);
            else if (key == "files" && opt_files->count() == 0)
                file_counts = parse_int_list(value);
            else if (key == "scale" && opt_scale->count() == 0)
                scale = std::stoll(value);
            else if (key == "max-files" && opt_max_files->count() == 0)
                max_files = std::stoll(value);
            else if (key == "seed" && opt_seed->count() == 0)
                seed = std::stoull(value);
            else if (key == "records") {
                if (opt_records == nullptr)
                    throw InvalidParams("config key 'records' does not apply here");
                if (opt_records->count() == 0) records = std::stoll(value);
            } else if (key != "scheme" && key != "nodes" && key != "load" &&
                       key != "iv-sizes" && key != "files" && key != "scale" &&
                       key != "max-files" && key != "seed") {
                throw InvalidParams("unknown config key '" + key + "'");
            }
        }
    }

    ExperimentConfig to_config() {
        apply_config();
        if (scheme.empty()) throw InvalidParams("a scheme is required");
        ExperimentConfig cfg;
        cfg.scheme = scheme_from_name(scheme);
        cfg.nodes = nodes;
        cfg.load = load;
        cfg.iv_sizes = iv_sizes;
        cfg.file_counts = file_counts;
        cfg.scale = scale;
        cfg.max_files = max_files;
        cfg.seed = seed;
        cfg.records = records;
        return cfg;
    }
};

void add_scheme_flags(CLI::App* cmd, SchemeFlags& flags, bool with_records) {
    flags.opt_scheme = cmd->add_option("--scheme", flags.scheme, "uncoded | lmya | flcd3 | flcd");
    flags.opt_nodes = cmd->add_option("--nodes", flags.nodes, "node count K");
    flags.opt_load = cmd->add_option("--load", flags.load, "computation load r");
    flags.opt_iv_sizes =
        cmd->add_option("--iv-sizes", flags.iv_sizes,
                        "IV bits: three values for flcd3, one for lmya/flcd, per node for uncoded")
            ->delimiter(',');
    flags.opt_files =
        cmd->add_option("--files", flags.file_counts, "per-node file counts (uncoded)")
            ->delimiter(',');
    flags.opt_scale = cmd->add_option("--scale", flags.scale, "file count multiplier (flcd3)");
    flags.opt_max_files =
        cmd->add_option("--max-files", flags.max_files, "refuse plans above this file count");
    flags.opt_seed = cmd->add_option("--seed", flags.seed, "workload seed");
    if (with_records) flags.opt_records = cmd->add_option("--records", flags.records, "record count");
    cmd->add_option("--config", flags.config_file,
                    "key = value defaults for any flag not given on the command line");
}

// Refuse oversized plans from the closed forms before materializing anything.
void enforce_file_limit(const ExperimentConfig& cfg) {
    std::int64_t files = 0;
    switch (cfg.scheme) {
        case SchemeId::FlcdGeneral:
            files = counts_flcd(cfg.nodes, cfg.load).first;
            break;
        case SchemeId::Lmya:
            files = binomial(cfg.nodes, cfg.load);
            break;
        case SchemeId::Flcd3:
            if (cfg.iv_sizes.size() == 3)
                files = flcd3_file_count(cfg.iv_sizes[0], cfg.iv_sizes[1], cfg.iv_sizes[2],
                                         cfg.scale);
            break;
        case SchemeId::Uncoded:
            for (auto c : cfg.file_counts) files += c;
            break;
    }
    if (files > cfg.max_files)
        throw FileLimitExceeded("plan needs " + std::to_string(files) +
                                " files, limit is " + std::to_string(cfg.max_files) +
                                " (raise --max-files to override)");
}

int cmd_table(const std::vector<std::string>& config_texts, const std::string& format,
              std::ostream& out) {
    std::vector<std::pair<int, int>> configs;
    if (config_texts.empty())
        configs.assign(standard_table_configs().begin(), standard_table_configs().end());
    else
        for (const auto& text : config_texts) configs.push_back(parse_config_pair(text));
    render_table(generate_table(configs), format, out);
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    enforce_file_limit(cfg);
    LoadComparison cmp = predict_vs_measure(cfg);
    out << "scheme: " << scheme_name(cfg.scheme);
    if (cfg.nodes != 0) out << "  K=" << cfg.nodes;
    if (cfg.load != 0) out << "  r=" << cfg.load;
    out << "  seed=" << cfg.seed << "\n";
    out << "files: " << cmp.files << "  shuffle groups: " << cmp.groups
        << "  broadcasts: " << cmp.counters.broadcasts << "\n";
    out << "predicted load: " << ratio_text(cmp.predicted) << "\n";
    out << "measured load:  " << ratio_text(cmp.measured) << "\n";
    out << "exact match: " << (cmp.exact ? "yes" : "no") << "\n";
    out << "decode: " << (cmp.decode_ok ? "ok" : "FAILED") << "\n";
    out << "broadcast bits: " << cmp.broadcast_bits << " of " << cmp.total_iv_bits
        << " total IV bits\n";
    out << "counters: map_ivs=" << cmp.counters.map_ivs
        << " encode_xors=" << cmp.counters.encode_xors
        << " decode_xors=" << cmp.counters.decode_xors << "\n";
    return 0;
}

int cmd_terasort(const ExperimentConfig& cfg, const std::string& input_file,
                 const std::string& output_dir, std::ostream& out) {
    enforce_file_limit(cfg);
    TerasortComparison cmp = input_file.empty()
                                 ? run_terasort_experiment(cfg)
                                 : run_terasort_experiment(cfg, read_records_file(input_file));
    const SortReport& rep = cmp.coded;
    out << "scheme: " << scheme_name(cfg.scheme);
    if (cfg.nodes != 0) out << "  K=" << cfg.nodes;
    if (cfg.load != 0) out << "  r=" << cfg.load;
    out << "  records=" << rep.records << "  seed=" << cfg.seed << "\n";
    out << "files: " << rep.files << "  shuffle groups: " << rep.groups << "\n";
    out << "map IVs: " << rep.map_ivs << "\n";
    out << "encode xors: " << rep.encode_xors << "\n";
    out << "shuffle payload bits: " << rep.traffic.payload_bits
        << "  prefix bits: " << rep.traffic.prefix_bits
        << "  padding bits: " << rep.traffic.padding_bits << "\n";
    out << "shuffle useful bits: " << rep.traffic.useful_bits.to_decimal(0) << "\n";
    out << "decode xors: " << rep.decode_xors << "\n";
    out << "reduce records: " << rep.records << "\n";
    out << "sorted: " << (rep.sorted_ok ? "yes" : "NO") << "  permutation: "
        << (rep.permutation_ok ? "yes" : "NO") << "  bounds: " << (rep.bounds_ok ? "yes" : "NO")
        << "\n";
    if (cfg.scheme != SchemeId::Uncoded) {
        out << "uncoded baseline useful bits: " << cmp.uncoded.traffic.useful_bits.to_decimal(0)
            << "\n";
        out << "measured coded/uncoded ratio: " << cmp.measured_ratio.to_decimal(4) << "\n";
        out << "predicted load ratio: " << cmp.predicted_ratio.to_decimal(4) << "\n";
    }
    if (!output_dir.empty()) {
        std::filesystem::create_directories(output_dir);
        for (int k = 0; k < rep.nodes; ++k) {
            auto path = std::filesystem::path(output_dir) / ("part-" + std::to_string(k) + ".bin");
            write_records_file(path.string(), rep.output[static_cast<std::size_t>(k)]);
        }
        out << "wrote " << rep.nodes << " part files to " << output_dir << "\n";
    }
    if (!rep.sorted_ok) throw SortViolation("output runs are not sorted");
    if (!rep.bounds_ok) throw SortViolation("a record landed outside its node's key range");
    if (!rep.permutation_ok) throw SortViolation("output is not a permutation of the input");
    return 0;
}

int cmd_gen_data(std::int64_t records, std::uint64_t seed, std::uint32_t key_bound,
                 const std::string& output, std::ostream& out) {
    write_records_file(output, generate_records(records, seed, key_bound));
    out << "wrote " << records << " records (" << records * kRecordBytes << " bytes) to "
        << output << "\n";
    return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"coded shuffle simulator and TeraSort driver"};
    app.require_subcommand(1);

    auto* table = app.add_subcommand("table", "closed-form load and complexity table");
    std::vector<std::string> table_configs;
    std::string format = "markdown";
    table->add_option("--configs", table_configs, "K:r pairs, default is the standard nine")
        ->delimiter(',');
    table->add_option("--format", format, "markdown | csv")
        ->check(CLI::IsMember({"markdown", "csv"}));

    auto* simulate = app.add_subcommand("simulate", "bit-exact shuffle, predicted vs measured");
    SchemeFlags sim_flags;
    add_scheme_flags(simulate, sim_flags, /*with_records=*/false);

    auto* terasort = app.add_subcommand("terasort", "distributed sort over the coded shuffle");
    SchemeFlags ts_flags;
    std::string input_file;
    std::string output_dir;
    add_scheme_flags(terasort, ts_flags, /*with_records=*/true);
    terasort->add_option("--input", input_file, "sort this dataset instead of generating one");
    terasort->add_option("--output-dir", output_dir, "write per-node part-<k>.bin files here");

    auto* gen = app.add_subcommand("gen-data", "write a raw record dataset");
    std::int64_t gen_records = 100'000;
    std::uint64_t gen_seed = 0;
    std::uint32_t gen_key_bound = 1u << 16;
    std::string gen_output;
    gen->add_option("--records", gen_records, "record count");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--key-bound", gen_key_bound, "exclusive key upper bound");
    gen->add_option("--output", gen_output, "output file")->required();

    try {
        args.insert(args.begin(), "cdcsim");
        std::vector<const char*> argv;
        argv.reserve(args.size());
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (table->parsed()) return cmd_table(table_configs, format, out);
        if (simulate->parsed()) return cmd_simulate(sim_flags.to_config(), out);
        if (terasort->parsed())
            return cmd_terasort(ts_flags.to_config(), input_file, output_dir, out);
        if (gen->parsed()) return cmd_gen_data(gen_records, gen_seed, gen_key_bound, gen_output, out);
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 1;
    } catch (const NotFeasible& e) {
        err << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParams& e) {
        err << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const FileLimitExceeded& e) {
        err << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const DecodeFailure& e) {
        err << "decode failure: " << e.what() << "\n";
        return 3;
    } catch (const SortViolation& e) {
        err << "sort failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cdc::cli
