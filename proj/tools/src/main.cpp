#include "CLI11.hpp"

#include "bh/bridges.hpp"
#include "bh/runner.hpp"
#include "bh/schedule.hpp"
#include "bh/wasserstein.hpp"
#include "bh/words.hpp"

#include "json.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) return std::nullopt;
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string load_config_text(const std::string& path) {
    if (path.empty()) return bh::config_to_json(bh::default_config());
    auto text = read_file(path);
    if (!text) {
        std::cerr << "cannot open config: " << path << "\n";
        std::exit(bh::kIoError);
    }
    return *text;
}

// Points as CSV rows "x,y,z"; lines that do not parse are skipped.
std::vector<bh::Point> read_points(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        std::cerr << "cannot open point list: " << path << "\n";
        std::exit(bh::kIoError);
    }
    std::vector<bh::Point> pts;
    std::string line;
    while (std::getline(f, line)) {
        double x, y, z;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &z) == 3)
            pts.push_back({x, y, z});
    }
    return pts;
}

int run_wasserstein(const std::string& a_path, const std::string& b_path, int cap) {
    auto pa = read_points(a_path);
    auto pb = read_points(b_path);
    if (pa.empty() || pb.empty()) {
        std::cerr << "empty point list\n";
        return bh::kIoError;
    }
    std::size_t m = std::min(pa.size(), pb.size());
    if (cap > 0) m = std::min<std::size_t>(m, static_cast<std::size_t>(cap));
    bool harmonized = (m != pa.size()) || (m != pb.size());
    bh::EmpiricalMeasure ma, mb;
    for (auto i : bh::stride_indices(pa.size(), m)) ma.support.push_back(pa[i]);
    for (auto i : bh::stride_indices(pb.size(), m)) mb.support.push_back(pb[i]);
    auto r = bh::w1(ma, mb);
    std::cout << "atoms: " << m;
    if (harmonized) std::cout << " (index-stride harmonized from " << pa.size() << "/" << pb.size() << ")";
    std::cout << "\nw1 = " << r.value;
    if (r.exact)
        std::cout << " (exact assignment)\n";
    else
        std::cout << " (auction, duality gap <= " << r.duality_gap << ")\n";
    return 0;
}

int run_code(const std::string& cfg_path, const std::string& scenario_override, int k_limit,
             bool as_json, const std::string& expand, const std::string& compress) {
    if (!expand.empty()) {
        auto w = bh::word_from_runlength(expand);
        if (!w) {
            std::cerr << "bad run-length expression\n";
            return 2;
        }
        std::cout << *w << "\n";
        return 0;
    }
    if (!compress.empty()) {
        if (!bh::is_binary_word(compress)) {
            std::cerr << "not a binary word\n";
            return 2;
        }
        std::cout << bh::word_to_runlength(compress) << "\n";
        return 0;
    }
    std::string err;
    auto cfg = bh::config_from_json(load_config_text(cfg_path), &err);
    if (!cfg) {
        std::cerr << "config error: " << err << "\n";
        return bh::kConfigError;
    }
    if (!scenario_override.empty()) cfg->scenario = scenario_override;
    if (cfg->scenario == "custom-code" && cfg->custom_words.empty()) {
        std::cerr << "custom-code needs custom_words in the config\n";
        return bh::kConfigError;
    }

    const bh::ModelParams& p = cfg->params;
    auto seed = bh::select_b0(p);
    if (!seed) {
        std::cerr << "no admissible seed bridge\n";
        return bh::kSeedFail;
    }
    int K = std::min(cfg->chain_depth, k_limit);
    bh::BridgeChain chain = bh::bridge_chain(p, seed->word, K + 2);
    bh::EraSeq eras = bh::default_era_seq(K + 2);
    bh::WordGenPtr src;
    if (cfg->scenario == "dirac")
        src = bh::gen_dirac_code();
    else if (cfg->scenario == "historic")
        src = bh::gen_historic_code(eras);
    else if (cfg->scenario == "thm18")
        src = bh::gen_thm18_pair().first;
    else
        src = bh::gen_custom_code(std::vector<bh::Word>(cfg->custom_words.begin(),
                                                        cfg->custom_words.end()));
    bh::BuildError be;
    auto sched = bh::gen_quadratic_schedule(p, chain, K, src, &be);
    if (!sched) {
        std::cerr << "schedule failed: " << be.stage << " at k=" << be.k << "\n";
        return bh::kScheduleFail;
    }
    if (as_json) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& hw : sched->blocks)
            out.push_back({{"k", hw.k},
                           {"alpha", sched->alpha_k(hw.k)},
                           {"beta", sched->beta_k(hw.k)},
                           {"nhat", hw.nhat},
                           {"prefix", bh::word_to_runlength(hw.prefix)},
                           {"free_word", bh::word_to_runlength(hw.free_word)},
                           {"iota", hw.iota},
                           {"gamma_len", static_cast<long>(hw.gamma.size())}});
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "seed " << seed->word << " (generation " << seed->n0 << ")\n";
    std::cout << "k  alpha  beta  nhat  |iota|  |gamma|  free word\n";
    for (const auto& hw : sched->blocks)
        std::cout << hw.k << "  " << sched->alpha_k(hw.k) << "  " << sched->beta_k(hw.k)
                  << "  " << hw.nhat << "  " << hw.iota.size() << "  " << hw.gamma.size()
                  << "  " << bh::word_to_runlength(hw.free_word) << "\n";
    std::cout << "total steps " << sched->total_steps << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affine fold-horseshoe laboratory: wandering domains, codes, statistics"};
    app.require_subcommand(1);

    auto* v = app.add_subcommand("validate", "Check the model parameter inequalities");
    std::string v_cfg;
    v->add_option("--config", v_cfg, "Run configuration JSON file");

    auto* r = app.add_subcommand("run", "Execute the full verification pipeline");
    std::string r_cfg, r_scenario, r_out;
    bool r_print = false;
    r->add_option("--config", r_cfg, "Run configuration JSON file");
    r->add_option("--scenario", r_scenario, "Override: dirac | historic | thm18 | custom-code");
    r->add_option("--output", r_out, "Override the output directory");
    r->add_flag("--print-config", r_print, "Print the default configuration and exit");

    auto* rp = app.add_subcommand("replay", "Re-run a report's config and diff the summaries");
    std::string rp_path;
    rp->add_option("report", rp_path, "Path to report.json")->required();

    auto* w = app.add_subcommand("wasserstein", "Transport distance between two CSV point lists");
    std::string w_a, w_b;
    int w_cap = 512;
    w->add_option("first", w_a, "CSV with x,y,z rows")->required();
    w->add_option("second", w_b, "CSV with x,y,z rows")->required();
    w->add_option("--cap", w_cap, "Harmonize both lists to at most this many atoms (0 = no cap)");

    auto* cd = app.add_subcommand("code", "Generate or inspect code schedules");
    std::string c_cfg, c_scenario, c_expand, c_compress;
    int c_limit = 12;
    bool c_json = false;
    cd->add_option("--config", c_cfg, "Run configuration JSON file");
    cd->add_option("--scenario", c_scenario, "dirac | historic | thm18 | custom-code");
    cd->add_option("--limit", c_limit, "Largest block index to emit");
    cd->add_flag("--json", c_json, "Emit JSON instead of a table");
    cd->add_option("--expand", c_expand, "Expand a run-length word like '0^12 1^4'");
    cd->add_option("--compress", c_compress, "Compress a binary word to run-length form");

    CLI11_PARSE(app, argc, argv);

    if (v->parsed()) return bh::cmd_validate(load_config_text(v_cfg), std::cout);
    if (r->parsed()) {
        if (r_print) {
            std::cout << bh::config_to_json(bh::default_config()) << "\n";
            return 0;
        }
        std::string text = load_config_text(r_cfg);
        if (!r_scenario.empty() || !r_out.empty()) {
            std::string err;
            auto cfg = bh::config_from_json(text, &err);
            if (!cfg) {
                std::cerr << "config error: " << err << "\n";
                return bh::kConfigError;
            }
            if (!r_scenario.empty()) cfg->scenario = r_scenario;
            if (!r_out.empty()) cfg->output_dir = r_out;
            text = bh::config_to_json(*cfg);
        }
        return bh::cmd_run(text, std::cout);
    }
    if (rp->parsed()) return bh::cmd_replay(rp_path, std::cout);
    if (w->parsed()) return run_wasserstein(w_a, w_b, w_cap);
    if (cd->parsed()) return run_code(c_cfg, c_scenario, c_limit, c_json, c_expand, c_compress);
    return 0;
}
