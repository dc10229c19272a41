#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "betanorm/base.hpp"
#include "betanorm/error.hpp"
#include "betanorm/expansion.hpp"
#include "betanorm/measure.hpp"
#include "betanorm/normalization.hpp"
#include "betanorm/torus.hpp"
#include "betanorm/wf.hpp"

namespace betanorm::cli {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to a sibling temporary and renames, so a failed run leaves no file.
void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
        f << content;
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot move output into '" + path + "'");
    }
}

struct Output {
    std::ostream& out;
    std::string path;

    void emit(const std::string& content) const {
        if (path.empty() || path == "-") {
            out << content;
        } else {
            write_atomic(path, content);
        }
    }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Shortest round-trip decimal for a double.
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json word_json(const PeriodicWord& w) { return json{{"pre", w.pre()}, {"per", w.per()}}; }

BasePtr load_base(const std::string& path) { return make_base(load_base_spec(path)); }

BasePtr base_from_json(const json& j) {
    if (j.is_string()) return load_base(j.get<std::string>());
    if (j.is_object()) return make_base(parse_base_spec(j.dump()));
    throw Error(ErrorCode::ParseError, "'base' must be a file path or an object with minpoly and d");
}

DigitWord read_stream(const std::string& path) {
    std::string text = read_file(path);
    std::string digits;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        if (ch < '0' || ch > '9') {
            throw Error(ErrorCode::ParseError, std::string("stream file holds a non-digit character '") + ch + "'");
        }
        digits.push_back(ch);
    }
    return parse_digits(digits);
}

std::string histogram_csv(const EmpiricalMeasure& m) {
    std::ostringstream os;
    os << "bin_left,bin_right,count\n";
    const double n = static_cast<double>(m.bins());
    for (std::size_t i = 0; i < m.bins(); ++i) {
        os << num(static_cast<double>(i) / n) << ',' << num(static_cast<double>(i + 1) / n) << ',' << m.counts[i]
           << '\n';
    }
    return os.str();
}

EmpiricalMeasure read_histogram(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "bin_left,bin_right,count") {
        throw Error(ErrorCode::ParseError, "'" + path + "': expected header bin_left,bin_right,count");
    }
    std::vector<std::uint64_t> counts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto last = line.rfind(',');
        if (last == std::string::npos) throw Error(ErrorCode::ParseError, "'" + path + "': bad row '" + line + "'");
        try {
            std::size_t used = 0;
            const std::string field = line.substr(last + 1);
            counts.push_back(std::stoull(field, &used));
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "'" + path + "': bad count in '" + line + "'");
        }
    }
    int bits = 0;
    while ((std::size_t{1} << bits) < counts.size()) ++bits;
    if (counts.empty() || (std::size_t{1} << bits) != counts.size()) {
        throw Error(ErrorCode::ParseError, "'" + path + "': cell count must be a power of two");
    }
    EmpiricalMeasure m(bits);
    m.counts = counts;
    for (auto c : counts) m.total += c;
    return m;
}

int log2_bins(long bins) {
    int b = 0;
    while ((1L << b) < bins) ++b;
    if (bins < 1 || (1L << b) != bins || b > 24) {
        throw Error(ErrorCode::InvalidArgument, "bins must be a power of two between 1 and 2^24");
    }
    return b;
}

template <class T>
T get_or(const json& cfg, const char* key, T fallback) {
    if (!cfg.contains(key)) return fallback;
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::ParseError, std::string("config key '") + key + "' has the wrong type");
    }
}

json wf_json(const WfReport& r) {
    json killers = json::array();
    for (const auto& k : r.killers) {
        json e{{"period", k.period}};
        if (k.killer) {
            e["y"] = k.killer->y.to_string();
            e["delta"] = k.killer->delta.get_str();
            e["f"] = k.killer->f;
            e["proof"] = word_json(k.killer->proof);
        } else {
            e["killer"] = nullptr;
        }
        killers.push_back(e);
    }
    return json{{"status", to_string(r.status)},
                {"L1", r.L1},
                {"L2", r.L2},
                {"p", r.p},
                {"p_integer", r.p_integer},
                {"p_normalization", r.p_normalization},
                {"L", r.L},
                {"killers", killers}};
}

struct Globals {
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool seed_given = false;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Normalization of beta-expansions over Pisot bases"};
    app.set_version_flag("--version", std::string("betanorm ") + BETANORM_VERSION +
                                          " (fixtures sha256:" + BETANORM_FIXTURE_HASH + ")");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Master seed for every random draw")->each([&](const std::string&) {
        g.seed_given = true;
    });
    app.add_option("--threads", g.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u));

    std::function<void()> action;
    std::string base_path, out_path;
    auto add_base = [&](CLI::App* sub) { sub->add_option("--base", base_path, "Base JSON file")->required(); };
    auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", out_path, "Output file (default stdout)"); };
    const Output* output = nullptr;
    Output stdout_output{out, ""};

    // expand
    std::string x_text;
    std::size_t max_states = 1000000;
    {
        auto* sub = app.add_subcommand("expand", "Greedy expansion of x in [0, 1)");
        add_base(sub);
        add_out(sub);
        sub->add_option("--x", x_text, "Element as \"p0/q0,p1/q1,...\" or a rational")->required();
        sub->add_option("--max-states", max_states);
        sub->callback([&] {
            action = [&] {
                auto base = load_base(base_path);
                const auto w = greedy_expand(*base, parse_element(base->context(), x_text), max_states);
                output->emit(word_json(w).dump() + "\n");
            };
        });
    }

    // normalize
    std::string word_text;
    {
        auto* sub = app.add_subcommand("normalize", "Normalization of a finite d-ary word");
        add_base(sub);
        add_out(sub);
        sub->add_option("--word", word_text, "Digits, e.g. 1021 or 1,0,2,1")->required();
        sub->callback([&] {
            action = [&] {
                auto base = load_base(base_path);
                const auto nw = normalize_finite(*base, parse_digits(word_text));
                output->emit(word_json(nw.word).dump() + "\n");
            };
        });
    }

    // blocks
    std::string stream_path;
    std::size_t random_len = 0, max_blocks = static_cast<std::size_t>(-1), budget = 1 << 20;
    int K = 0;
    {
        auto* sub = app.add_subcommand("blocks", "Block decomposition of a digit stream");
        add_base(sub);
        add_out(sub);
        auto* s = sub->add_option("--stream", stream_path, "File of ASCII digits");
        auto* r = sub->add_option("--random", random_len, "Use this many seeded uniform digits instead");
        s->excludes(r);
        sub->add_option("--K", K, "Zero-run parameter (default: estimated)");
        sub->add_option("--max-blocks", max_blocks);
        sub->add_option("--budget", budget, "Digits allowed without completing a block");
        sub->callback([&] {
            action = [&] {
                auto base = load_base(base_path);
                DigitWord digits;
                if (!stream_path.empty()) {
                    digits = read_stream(stream_path);
                } else if (random_len > 0) {
                    RandomSource src(base->d(), g.seed);
                    for (std::size_t i = 0; i < random_len; ++i) digits.push_back(*src.next());
                } else {
                    throw Error(ErrorCode::InvalidArgument, "give --stream or --random");
                }
                const int k = K > 0 ? K : estimate_K(*base, 12, g.seed).K;
                SpanSource src(digits);
                const auto dec = block_split(*base, src, k, budget, max_blocks);
                json j{{"K", k}, {"cuts", dec.cuts}, {"blocks", dec.blocks}, {"normalized", dec.normalized},
                       {"pending", dec.pending.size()}};
                output->emit(dump(j));
            };
        });
    }

    // wf-check
    WfBounds bounds;
    {
        auto* sub = app.add_subcommand("wf-check", "Period killers and the constants L1, L2, p, L");
        add_base(sub);
        add_out(sub);
        sub->add_option("--max-killer-len", bounds.max_killer_len);
        sub->add_option("--k-len", bounds.k_max_len, "Word length for the L1 estimate");
        sub->callback([&] {
            action = [&] {
                auto base = load_base(base_path);
                bounds.seed = g.seed;
                output->emit(dump(wf_json(wf_check(*base, bounds))));
            };
        });
    }

    // gamma
    int L = 0;
    std::size_t n_max = 60, samples = 100000;
    {
        auto* sub = app.add_subcommand("gamma", "Fraction of words with no finite prefix vs gamma^n (CSV)");
        add_base(sub);
        add_out(sub);
        sub->add_option("--L", L, "Default: L from wf-check");
        sub->add_option("--n-max", n_max);
        sub->add_option("--samples", samples);
        sub->callback([&] {
            action = [&] {
                auto base = load_base(base_path);
                const int l = L > 0 ? L : wf_check(*base, WfBounds{30, 12, g.seed}).L;
                const auto rows = gamma_experiment(*base, l, n_max, samples, g.seed, g.threads);
                std::ostringstream os;
                os << "n,observed,bound,sigma\n";
                for (const auto& row : rows) {
                    os << row.n << ',' << num(row.observed) << ',' << num(row.bound) << ',' << num(row.sigma) << '\n';
                }
                output->emit(os.str());
            };
        });
    }

    // simulate
    std::string config_path, report_path;
    {
        auto* sub = app.add_subcommand("simulate", "Histogram of the Erdos or invariant measure (CSV)");
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        add_out(sub);
        sub->add_option("--report", report_path, "JSON run report");
        sub->callback([&] {
            action = [&] {
                json cfg;
                try {
                    cfg = json::parse(read_file(config_path));
                } catch (const json::exception& e) {
                    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
                }
                if (!cfg.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
                static const std::set<std::string> keys{"base",  "sanity", "estimator", "samples", "bins",
                                                        "N",     "K",      "seed",      "left",    "burn_in",
                                                        "shift", "budget"};
                for (const auto& [key, _] : cfg.items()) {
                    if (!keys.count(key)) throw Error(ErrorCode::ParseError, "config: unknown key '" + key + "'");
                }
                const bool sanity = get_or(cfg, "sanity", false);
                if (!sanity && !cfg.contains("base")) throw Error(ErrorCode::ParseError, "config: 'base' is required");
                if (sanity && cfg.contains("base")) {
                    throw Error(ErrorCode::ParseError, "config: 'sanity' replaces 'base'; give one of them");
                }
                BasePtr base = sanity ? nullptr : base_from_json(cfg.at("base"));
                const RealBase real = sanity ? RealBase::lebesgue_sanity() : RealBase::of(*base);
                const std::string estimator = get_or<std::string>(cfg, "estimator", "erdos");
                const auto n = get_or<std::size_t>(cfg, "samples", 100000);
                const int bits = log2_bins(get_or<long>(cfg, "bins", 128));
                const std::uint64_t seed = g.seed_given ? g.seed : get_or<std::uint64_t>(cfg, "seed", g.seed);

                EmpiricalMeasure m;
                int k_used = 0;
                if (estimator == "erdos") {
                    m = sample_erdos(real, n, get_or(cfg, "N", min_truncation(real, bits) + 8), bits, seed, g.threads);
                } else if (estimator == "two-sided" || estimator == "birkhoff") {
                    InvariantParams p;
                    p.samples = n;
                    p.bits = bits;
                    p.seed = seed;
                    p.threads = g.threads;
                    p.N = get_or(cfg, "N", 0);
                    p.left = get_or<std::size_t>(cfg, "left", p.left);
                    p.burn_in = get_or(cfg, "burn_in", p.burn_in);
                    p.shift = get_or(cfg, "shift", 0);
                    p.budget = get_or<std::size_t>(cfg, "budget", p.budget);
                    if (estimator == "two-sided") {
                        if (!base) throw Error(ErrorCode::InvalidArgument, "two-sided needs a Pisot base");
                        p.K = get_or(cfg, "K", 0);
                        if (p.K <= 0) p.K = estimate_K(*base, 12, seed).K;
                        k_used = p.K;
                    } else {
                        p.method = InvariantMethod::Birkhoff;
                    }
                    m = invariant_estimate(base.get(), real, p);
                } else {
                    throw Error(ErrorCode::ParseError, "config: estimator must be erdos, two-sided or birkhoff");
                }
                json report{{"estimator", m.estimator}, {"samples", n},  {"bins", m.bins()},
                            {"N", m.N},                 {"seed", seed},  {"total", m.total},
                            {"sanity", sanity}};
                if (k_used) report["K"] = k_used;
                if (base) {
                    const auto parry = parry_density(*base);
                    const auto masses = parry.cell_masses(bits);
                    const auto p = m.probabilities();
                    double tv = 0;
                    for (std::size_t i = 0; i < p.size(); ++i) tv += std::fabs(p[i] - masses[i]) / 2;
                    report["tv_vs_parry"] = tv;
                }
                // Both files are prepared before either is written.
                const std::string csv = histogram_csv(m);
                const std::string rep = dump(report);
                output->emit(csv);
                if (!report_path.empty()) write_atomic(report_path, rep);
            };
        });
    }

    // parry
    {
        auto* sub = app.add_subcommand("parry", "Piecewise-constant invariant density of x -> beta x mod 1");
        add_base(sub);
        add_out(sub);
        sub->callback([&] {
            action = [&] {
                auto base = load_base(base_path);
                const auto d = parry_density(*base);
                json breaks = json::array(), values = json::array();
                for (auto b : d.breaks) breaks.push_back(static_cast<double>(b));
                for (auto v : d.values) values.push_back(static_cast<double>(v));
                output->emit(dump(json{{"breaks", breaks},
                                       {"values", values},
                                       {"normalization", static_cast<double>(d.normalization)},
                                       {"integral", static_cast<double>(d.integral())}}));
            };
        });
    }

    // diagnose
    std::string nu_path, against_path;
    int refinements = 1;
    double sigmas = 5;
    {
        auto* sub = app.add_subcommand("diagnose", "Compare two histograms (TV under coarsening, support)");
        sub->add_option("--nu", nu_path, "Histogram CSV")->required();
        sub->add_option("--against", against_path, "Histogram CSV with the same cell count")->required();
        sub->add_option("--refinements", refinements)->check(CLI::NonNegativeNumber);
        sub->add_option("--sigmas", sigmas)->check(CLI::PositiveNumber);
        add_out(sub);
        sub->callback([&] {
            action = [&] {
                const auto a = read_histogram(nu_path), b = read_histogram(against_path);
                if (a.bins() != b.bins()) throw Error(ErrorCode::InvalidArgument, "histograms differ in cell count");
                if (refinements > a.bits()) throw Error(ErrorCode::InvalidArgument, "too many refinements");
                json rows = json::array();
                double prev = -1;
                bool non_decreasing = true;
                for (int r = refinements; r >= 0; --r) {
                    const int bits = a.bits() - r;
                    const double tv = total_variation(a.coarsen(bits), b.coarsen(bits));
                    if (prev > tv) non_decreasing = false;
                    prev = tv;
                    rows.push_back(json{{"bins", std::size_t{1} << bits}, {"tv", tv}});
                }
                output->emit(dump(json{{"tv", rows},
                                       {"non_decreasing", non_decreasing},
                                       {"support_violations", support_violations(a, b, sigmas)},
                                       {"sigmas", sigmas}}));
            };
        });
    }

    // torus-check
    std::string window_path;
    std::size_t left = 0;
    double tol = 1e-10;
    {
        auto* sub = app.add_subcommand("torus-check", "Torus formula residual for a two-sided window");
        add_base(sub);
        add_out(sub);
        sub->add_option("--window", window_path, "File of ASCII digits")->required();
        sub->add_option("--left", left, "Number of window coordinates at index <= 0")->required();
        sub->add_option("--tol", tol)->check(CLI::PositiveNumber);
        sub->callback([&] {
            action = [&] {
                auto base = load_base(base_path);
                Window w;
                w.digits = read_stream(window_path);
                w.left = left;
                if (left > w.digits.size()) throw Error(ErrorCode::InvalidArgument, "--left exceeds the window");
                const auto r = torus_check(*base, w, tol);
                json n = json::array(), d = json::array();
                for (auto v : r.normalized) n.push_back(static_cast<double>(v));
                for (auto v : r.direct) d.push_back(static_cast<double>(v));
                output->emit(dump(json{{"residual", static_cast<double>(r.residual)},
                                       {"truncation", r.truncation},
                                       {"normalized", n},
                                       {"direct", d},
                                       {"pass", r.residual < 1e-8}}));
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        app.exit(e, out, err);
        return 2;
    }
    Output file_output{out, out_path};
    output = out_path.empty() ? &stdout_output : &file_output;
    try {
        action();
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        if (is_validation_error(e.code())) return 2;
        if (is_budget_error(e.code())) return 3;
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace betanorm::cli
