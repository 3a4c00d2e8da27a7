#pragma once

// Experiment configs (JSON), case runs, claim sweeps and the imaginary-part
// table, with their CSV/JSON artifacts.

#include <bts/block.hpp>
#include <bts/error.hpp>
#include <bts/fourier.hpp>
#include <bts/matrix_functions.hpp>
#include <bts/spectral.hpp>
#include <bts/structured.hpp>
#include <bts/symbol.hpp>
#include <bts/trend.hpp>
#include <bts/verification.hpp>

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bts {

using json = nlohmann::json;

inline constexpr std::string_view kToolVersion = "1.0.0";

struct GridsizePolicy {
    /// 0 means "match n": the symbol is sampled at n points.
    std::size_t fixed = 0;

    std::size_t resolve(std::size_t n) const { return fixed == 0 ? n : fixed; }
    std::string describe() const { return fixed == 0 ? "match_n" : "fixed(" + std::to_string(fixed) + ")"; }
};

struct TestFunctionSpec {
    double center = 0.0;
    double width = 1.0;
};

struct OutputToggles {
    bool spectra = true;
    bool comparison = true;
    bool table = true;
    std::vector<std::string> verify;
};

struct ExperimentConfig {
    std::string name;
    std::size_t k = 0;
    BlockLayout layout = BlockLayout::tridiagonal;
    /// Symbol text per 1-based (i, j).
    std::map<std::pair<std::size_t, std::size_t>, std::string> block_texts;
    BlockSymbol symbol{1, BlockLayout::full};
    std::vector<std::size_t> n_list;
    GridsizePolicy gridsize;
    CirculantStrategy circulant = CirculantStrategy::optimal;
    std::size_t quadrature_resolution = kDefaultQuadratureResolution;
    std::string output_dir = "out";
    OutputToggles outputs;
    std::optional<TestFunctionSpec> test_function;
    /// Canonical serialization of the input, hashed into the manifest.
    std::string canonical;
};

inline const std::vector<std::string>& known_claims() {
    static const std::vector<std::string> claims{"circ", "lemma2", "lemma3", "cor1", "thm1"};
    return claims;
}

namespace detail {

inline std::size_t parse_index(std::string_view text, const std::string& pointer) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ValidationError("block key must look like \"i,j\"", pointer);
    return value;
}

inline std::size_t require_count(const json& j, const std::string& pointer, std::size_t minimum) {
    if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(minimum))
        throw ValidationError("expected an integer >= " + std::to_string(minimum), pointer);
    return j.get<std::size_t>();
}

inline const std::string& require_string(const json& j, const std::string& pointer) {
    if (!j.is_string()) throw ValidationError("expected a string", pointer);
    return j.get_ref<const std::string&>();
}

inline bool require_bool(const json& j, const std::string& pointer) {
    if (!j.is_boolean()) throw ValidationError("expected a boolean", pointer);
    return j.get<bool>();
}

}  // namespace detail

/// Validates a parsed config object. Every symbol is parsed here.
inline ExperimentConfig parse_config(const json& root) {
    if (!root.is_object()) throw ValidationError("config must be a JSON object", "");
    static const std::set<std::string> allowed{"name",      "description",  "k",
                                               "layout",    "blocks",       "n_list",
                                               "gridsize",  "circulant",    "quadrature_resolution",
                                               "output_dir", "outputs",     "test_function"};
    for (const auto& [key, value] : root.items())
        if (!allowed.count(key)) throw ValidationError("unknown field '" + key + "'", "/" + key);
    for (const char* key : {"name", "k", "blocks", "n_list"})
        if (!root.contains(key)) throw ValidationError(std::string("missing required field '") + key + "'",
                                                       std::string("/") + key);

    ExperimentConfig c;
    c.name = detail::require_string(root["name"], "/name");
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos || c.name == "." || c.name == "..")
        throw ValidationError("name must be a nonempty plain file name", "/name");
    c.k = detail::require_count(root["k"], "/k", 1);
    if (root.contains("layout")) {
        const auto& layout = detail::require_string(root["layout"], "/layout");
        if (layout == "tridiagonal") c.layout = BlockLayout::tridiagonal;
        else if (layout == "full") c.layout = BlockLayout::full;
        else throw ValidationError("layout must be \"tridiagonal\" or \"full\"", "/layout");
    }

    c.symbol = BlockSymbol(c.k, c.layout);
    const json& blocks = root["blocks"];
    if (!blocks.is_object() || blocks.empty()) throw ValidationError("blocks must be a nonempty object", "/blocks");
    for (const auto& [key, value] : blocks.items()) {
        const std::string pointer = "/blocks/" + key;
        const auto comma = key.find(',');
        if (comma == std::string::npos) throw ValidationError("block key must look like \"i,j\"", pointer);
        const std::size_t i = detail::parse_index(std::string_view(key).substr(0, comma), pointer);
        const std::size_t j = detail::parse_index(std::string_view(key).substr(comma + 1), pointer);
        if (i < 1 || j < 1 || i > c.k || j > c.k)
            throw ValidationError("block key " + key + " outside 1.." + std::to_string(c.k), pointer);
        if (c.layout == BlockLayout::tridiagonal && (i > j + 1 || j > i + 1))
            throw ValidationError("tridiagonal layout rejects block " + key, pointer);
        const std::string& text = detail::require_string(value, pointer);
        try {
            c.symbol.set(i - 1, j - 1, parse_symbol(text));
        } catch (const SymbolSyntaxError& e) {
            throw ValidationError("symbol \"" + text + "\": " + e.what(), pointer);
        }
        c.block_texts[{i, j}] = text;
    }

    const json& ns = root["n_list"];
    if (!ns.is_array() || ns.empty()) throw ValidationError("n_list must be a nonempty array", "/n_list");
    for (std::size_t idx = 0; idx < ns.size(); ++idx) {
        const std::string pointer = "/n_list/" + std::to_string(idx);
        const std::size_t n = detail::require_count(ns[idx], pointer, 2);
        if (!c.n_list.empty() && n <= c.n_list.back())
            throw ValidationError("n_list must be strictly ascending", pointer);
        c.n_list.push_back(n);
    }

    if (root.contains("gridsize")) {
        const json& g = root["gridsize"];
        if (g.is_string() && g.get<std::string>() == "match_n") {
            c.gridsize.fixed = 0;
        } else if (g.is_object() && g.size() == 1 && g.contains("fixed")) {
            c.gridsize.fixed = detail::require_count(g["fixed"], "/gridsize/fixed", 1);
        } else {
            throw ValidationError("gridsize must be \"match_n\" or {\"fixed\": m}", "/gridsize");
        }
    }
    if (root.contains("circulant"))
        c.circulant = parse_circulant_strategy(detail::require_string(root["circulant"], "/circulant"));
    if (root.contains("quadrature_resolution")) {
        c.quadrature_resolution = detail::require_count(root["quadrature_resolution"], "/quadrature_resolution", 4);
        if (!std::has_single_bit(c.quadrature_resolution))
            throw ValidationError("quadrature_resolution must be a power of two", "/quadrature_resolution");
    }
    if (root.contains("output_dir")) c.output_dir = detail::require_string(root["output_dir"], "/output_dir");

    if (root.contains("outputs")) {
        const json& o = root["outputs"];
        if (!o.is_object()) throw ValidationError("outputs must be an object", "/outputs");
        for (const auto& [key, value] : o.items()) {
            const std::string pointer = "/outputs/" + key;
            if (key == "spectra") c.outputs.spectra = detail::require_bool(value, pointer);
            else if (key == "comparison") c.outputs.comparison = detail::require_bool(value, pointer);
            else if (key == "table") c.outputs.table = detail::require_bool(value, pointer);
            else if (key == "verify") {
                if (!value.is_array()) throw ValidationError("expected an array of claim ids", pointer);
                for (std::size_t idx = 0; idx < value.size(); ++idx) {
                    const std::string& claim = detail::require_string(value[idx], pointer + "/" + std::to_string(idx));
                    const auto& known = known_claims();
                    if (std::find(known.begin(), known.end(), claim) == known.end())
                        throw ValidationError("unknown claim id '" + claim + "'", pointer + "/" + std::to_string(idx));
                    c.outputs.verify.push_back(claim);
                }
            } else {
                throw ValidationError("unknown field '" + key + "'", pointer);
            }
        }
    }

    if (root.contains("test_function")) {
        const json& t = root["test_function"];
        if (!t.is_object() || !t.contains("gaussian_bump") || !t["gaussian_bump"].is_object())
            throw ValidationError("test_function must be {\"gaussian_bump\": {\"center\": c, \"width\": w}}",
                                  "/test_function");
        const json& g = t["gaussian_bump"];
        TestFunctionSpec spec;
        if (!g.contains("center") || !g["center"].is_number())
            throw ValidationError("expected a number", "/test_function/gaussian_bump/center");
        if (!g.contains("width") || !g["width"].is_number() || !(g["width"].get<double>() > 0.0))
            throw ValidationError("expected a positive number", "/test_function/gaussian_bump/width");
        spec.center = g["center"].get<double>();
        spec.width = g["width"].get<double>();
        c.test_function = spec;
    }

    c.canonical = root.dump();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(root);
}

/// 64-bit FNV-1a as 16 lowercase hex digits.
inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return out;
}

/// Shortest form that round-trips, at most 17 significant digits, C locale.
inline std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc()) throw Error("format_number failed");
    return std::string(buf, ptr);
}

/// Writes `content` to a sibling temp file and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

/// `index,re,im,symbol_sample` rows sorted by (re, im), 1-based index.
inline std::string spectrum_csv(const Spectrum& spectrum, const Spectrum& reference) {
    const Spectrum sorted = spectrum.sorted();
    std::vector<double> ref = reference.sorted_real_parts();
    std::ostringstream out;
    out << "index,re,im,symbol_sample\n";
    const double last = ref.empty() ? 0.0 : static_cast<double>(ref.size() - 1);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double sample = 0.0;
        if (!ref.empty()) {
            sample = ref.size() == sorted.size()
                         ? ref[i]
                         : interpolate_sorted(ref, sorted.size() == 1 ? 0.5 * last
                                                                      : last * static_cast<double>(i) /
                                                                            static_cast<double>(sorted.size() - 1));
        }
        out << (i + 1) << ',' << format_number(sorted.values[i].real()) << ','
            << format_number(sorted.values[i].imag()) << ',' << format_number(sample) << '\n';
    }
    return out.str();
}

inline std::string trend_csv(const TrendReport& r) {
    std::ostringstream out;
    out << "n,residual,scaled_residual\n";
    for (std::size_t i = 0; i < r.n_values.size(); ++i)
        out << r.n_values[i] << ',' << format_number(r.residuals[i]) << ',' << format_number(r.scaled_residuals[i])
            << '\n';
    return out.str();
}

inline std::string table_csv(const ImagTable& t) {
    std::ostringstream out;
    out << "n,max_abs_imag\n";
    for (std::size_t i = 0; i < t.n_values.size(); ++i)
        out << t.n_values[i] << ',' << format_number(t.max_abs_imag[i]) << '\n';
    return out.str();
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const TrendReport& r) {
    json j{{"claim", r.claim},
           {"n", r.n_values},
           {"residual", r.residuals},
           {"scaled_residual", r.scaled_residuals},
           {"verdict", std::string(to_string(r.verdict))},
           {"slope", optional_number(r.slope)},
           {"exact", r.exact},
           {"assessed", r.assessed},
           {"hypothesis_satisfied", r.hypothesis_satisfied},
           {"clamped_eigenvalues", r.clamped_eigenvalues},
           {"note", r.note}};
    if (!r.breakdown.empty()) {
        json rows = json::array();
        for (const auto& b : r.breakdown) rows.push_back({{"diagonal", b.diagonal}, {"sub", b.sub}, {"super", b.super}});
        j["breakdown"] = rows;
    }
    return j;
}

/// Grid-probed range of each present symbol and hypothesis warnings.
inline json symbol_diagnostics(const ExperimentConfig& c, std::vector<std::string>& warnings) {
    json out = json::object();
    for (const auto& [ij, text] : c.block_texts) {
        const auto& e = *c.symbol.at(ij.first - 1, ij.second - 1);
        const RangeProbe p = essinf_probe(e, 4096);
        const std::string key = std::to_string(ij.first) + "," + std::to_string(ij.second);
        out[key] = {{"symbol", text}, {"grid_min", p.min}, {"grid_max", p.max},
                    {"periodic_continuous", is_periodic_continuous(e)}};
        if (ij.first != ij.second && !(p.min > 0.0))
            warnings.push_back("block " + key + " has grid essinf " + format_number(p.min) +
                               " <= 0: outside the symmetrization hypothesis");
    }
    return out;
}

/// Context shared by every command writing into one case directory.
struct RunContext {
    std::filesystem::path directory;
    std::string command;
    ClampLog clamp;
    std::vector<std::string> files;
    std::vector<std::string> warnings;

    void write(const std::string& name, const std::string& content) {
        write_atomic(directory / name, content);
        files.push_back(name);
    }
};

inline json manifest_json(const ExperimentConfig& c, const RunContext& ctx, std::size_t max_order_lag) {
    return json{{"tool", "bts"},
                {"version", std::string(kToolVersion)},
                {"command", ctx.command},
                {"config_name", c.name},
                {"config_hash_fnv1a64", fnv1a_hex(c.canonical)},
                {"quadrature_resolution", c.quadrature_resolution},
                {"quadrature_resolution_effective",
                 quadrature_resolution_for(max_order_lag, c.quadrature_resolution)},
                {"quadrature_rule", "midpoint rule + FFT; trigonometric polynomials use exact coefficients; "
                                    "effective resolution is max(requested, next power of two >= 4*maxlag)"},
                {"circulant_strategy", std::string(to_string(c.circulant))},
                {"gridsize_policy", c.gridsize.describe()},
                {"clamp_policy",
                 {{"lower_relative", kDefaultClampPolicy.lower_relative},
                  {"floor_relative", kDefaultClampPolicy.floor_relative}}},
                {"clamp_counts",
                 {{"clamped_eigenvalues", ctx.clamp.clamped_eigenvalues},
                  {"factorizations", ctx.clamp.factorizations}}},
                {"eigensolver", "Eigen EigenSolver (real input) / ComplexEigenSolver (complex input)"},
                {"x_axis", "sorted index / kn"},
                {"files", ctx.files},
                {"warnings", ctx.warnings}};
}

inline void write_manifest(const ExperimentConfig& c, RunContext& ctx, std::size_t max_n) {
    const std::size_t lag = max_n > 0 ? max_n - 1 : 0;
    const json m = manifest_json(c, ctx, lag);
    write_atomic(ctx.directory / "manifest.json", m.dump(2) + "\n");
}

struct CaseMetrics {
    std::size_t n = 0;
    std::size_t gridsize = 0;
    double max_abs_imag = 0.0;
    DistributionComparison comparison;
    std::optional<double> distribution_residual;
};

struct CaseArtifacts {
    std::filesystem::path directory;
    std::vector<CaseMetrics> metrics;
    std::optional<ImagTable> table;
    std::vector<std::string> files;
};

/// Assembles A_n for each configured n, compares its spectrum with the
/// symbol sampling, and writes spectra, metrics and manifest into
/// `<out_root>/<name>/`.
inline CaseArtifacts run_case(const ExperimentConfig& c, const std::filesystem::path& out_root) {
    RunContext ctx{out_root / c.name, "run", {}, {}, {}};
    const json diagnostics = symbol_diagnostics(c, ctx.warnings);
    CaseArtifacts artifacts;
    artifacts.directory = ctx.directory;
    json per_n = json::array();
    ImagTable table;
    for (std::size_t n : c.n_list) {
        const Spectrum spectrum = eig_general(assemble(c.symbol, n, c.quadrature_resolution), {n, c.k, "A_n"});
        const std::size_t gridsize = c.gridsize.resolve(n);
        const Spectrum reference = sample_symbol_spectrum(c.symbol, gridsize, SymbolVariant::plain);
        CaseMetrics m{n, gridsize, spectrum.max_abs_imag(), compare_distributions(spectrum, reference), {}};
        if (c.test_function)
            m.distribution_residual =
                distribution_residual(spectrum, c.symbol,
                                      TestFunction::gaussian_bump(c.test_function->center, c.test_function->width),
                                      gridsize);
        if (c.outputs.spectra) ctx.write("spectrum_n" + std::to_string(n) + ".csv", spectrum_csv(spectrum, reference));
        table.n_values.push_back(n);
        table.max_abs_imag.push_back(m.max_abs_imag);

        json entry{{"n", n}, {"order", n * c.k}, {"gridsize", gridsize}, {"max_abs_imag", m.max_abs_imag}};
        if (c.outputs.comparison) {
            entry["sup_sorted_gap"] = m.comparison.sup_sorted_gap;
            entry["wasserstein1"] = m.comparison.wasserstein1;
            entry["symbol_max_abs_imag"] = m.comparison.reference_max_abs_imag;
            if (m.distribution_residual) entry["distribution_residual"] = *m.distribution_residual;
        }
        per_n.push_back(entry);
        artifacts.metrics.push_back(m);
    }
    if (c.outputs.table) {
        std::vector<double> xs(table.n_values.begin(), table.n_values.end());
        table.exact = std::all_of(table.max_abs_imag.begin(), table.max_abs_imag.end(),
                                  [](double v) { return v <= kNegligibleImaginary; });
        if (!table.exact) table.slope = loglog_slope(xs, table.max_abs_imag);
        ctx.write("table_imag.csv", table_csv(table));
        artifacts.table = table;
    }
    json metrics{{"case", c.name},
                 {"k", c.k},
                 {"layout", std::string(to_string(c.layout))},
                 {"symbols", diagnostics},
                 {"runs", per_n},
                 {"warnings", ctx.warnings}};
    if (c.test_function)
        metrics["test_function"] = {{"family", "gaussian_bump"},
                                    {"center", c.test_function->center},
                                    {"width", c.test_function->width}};
    if (artifacts.table) metrics["imag_slope"] = optional_number(artifacts.table->slope);
    ctx.write("metrics.json", metrics.dump(2) + "\n");
    write_manifest(c, ctx, c.n_list.back());
    artifacts.files = ctx.files;
    return artifacts;
}

/// Outcome of one claim on one symbol (or pair) of a case.
struct ClaimResult {
    std::string id;
    std::string subject;
    std::optional<TrendReport> report;
    /// Set when the claim's hypothesis fails and the sweep was not run.
    std::string refused;
};

namespace detail {

inline std::string block_label(std::size_t i, std::size_t j) { return std::to_string(i + 1) + std::to_string(j + 1); }

inline std::string symbol_text(const BlockSymbol& s, std::size_t i, std::size_t j) { return print_symbol(*s.at(i, j)); }

}  // namespace detail

/// Runs the requested claim sweeps. Claims whose positivity hypothesis fails
/// are refused with a message instead of failing the whole command.
inline std::vector<ClaimResult> run_claims(const ExperimentConfig& c, const std::vector<std::string>& claims,
                                           const std::vector<std::size_t>& n_list, ClampLog* clamp = nullptr) {
    VerifyOptions opt;
    opt.resolution = c.quadrature_resolution;
    opt.strategy = c.circulant;
    const BlockSymbol& s = c.symbol;
    std::vector<ClaimResult> results;

    auto attempt = [&](std::string id, std::string subject, auto&& sweep) {
        ClaimResult r{std::move(id), std::move(subject), std::nullopt, {}};
        try {
            r.report = sweep();
            if (clamp) clamp->clamped_eigenvalues += r.report->clamped_eigenvalues;
        } catch (const HypothesisError& e) {
            r.refused = e.what();
        }
        results.push_back(std::move(r));
    };

    for (const auto& claim : claims) {
        const auto& known = known_claims();
        if (std::find(known.begin(), known.end(), claim) == known.end())
            throw ValidationError("unknown claim id '" + claim + "'", "/claims");
        if (claim == "circ") {
            for (std::size_t i = 0; i < s.k(); ++i)
                for (std::size_t j = 0; j < s.k(); ++j)
                    if (s.present(i, j))
                        attempt("circ_f" + detail::block_label(i, j), "f" + detail::block_label(i, j) + " = " +
                                                                          detail::symbol_text(s, i, j),
                                [&] { return verify_circulant_approx(*s.at(i, j), n_list, opt); });
        } else if (claim == "lemma2" || claim == "lemma3") {
            for (std::size_t j = 0; j + 1 < s.k(); ++j) {
                if (!s.present(j, j + 1) || !s.present(j + 1, j)) continue;
                const SymbolExpr& upper = *s.at(j, j + 1);
                const SymbolExpr& lower = *s.at(j + 1, j);
                const std::string pair = "pair" + std::to_string(j + 1);
                if (claim == "lemma2") {
                    const std::string subject =
                        "f = f" + detail::block_label(j + 1, j) + ", g = f" + detail::block_label(j, j + 1);
                    for (GeomeanMode mode : {GeomeanMode::plain, GeomeanMode::inverse_first})
                        attempt("lemma2_" + std::string(to_string(mode)) + "_" + pair, subject,
                                [&] { return verify_geomean_circulant(lower, upper, n_list, mode, opt); });
                } else {
                    attempt("lemma3_" + pair,
                            "f = f" + detail::block_label(j, j + 1) + ", g = f" + detail::block_label(j + 1, j),
                            [&] { return verify_mixed_mean_identity(upper, lower, n_list, opt); });
                }
            }
        } else if (claim == "cor1") {
            std::vector<std::pair<SymbolExpr, SymbolExpr>> pairs;
            for (std::size_t j = 0; j + 1 < s.k(); ++j)
                if (s.present(j, j + 1) && s.present(j + 1, j)) pairs.emplace_back(*s.at(j + 1, j), *s.at(j, j + 1));
            if (pairs.empty() || pairs.size() > 4) {
                results.push_back({"cor1", "off-diagonal pairs", std::nullopt,
                                   "needs 1 to 4 complete off-diagonal pairs, found " + std::to_string(pairs.size())});
            } else {
                attempt("cor1", "product over (f_{j+1,j}, f_{j,j+1}), inverse_first",
                        [&] { return verify_geomean_product(pairs, n_list, GeomeanMode::inverse_first, opt); });
            }
        } else {
            attempt("thm1", "block symbol " + c.name, [&] {
                try {
                    return verify_symmetrization(s, n_list, opt);
                } catch (const NotHpdError& e) {
                    if (symmetrization_hypothesis_holds(s, opt.probe_gridsize)) throw;
                    throw HypothesisError(std::string("off-diagonal symbols violate essinf > 0 and a Toeplitz block "
                                                      "is not HPD even after clamping: ") +
                                          e.what());
                }
            });
        }
    }
    return results;
}

inline json to_json(const ClaimResult& r) {
    json j{{"id", r.id}, {"subject", r.subject}};
    if (r.report) j["report"] = to_json(*r.report);
    else j["refused"] = r.refused;
    return j;
}

/// Writes `<id>_trend.csv` per executed claim plus `verify.json` and the manifest.
inline std::vector<ClaimResult> command_verify(const ExperimentConfig& c, const std::vector<std::string>& claims,
                                               const std::vector<std::size_t>& n_list,
                                               const std::filesystem::path& out_root) {
    RunContext ctx{out_root / c.name, "verify", {}, {}, {}};
    symbol_diagnostics(c, ctx.warnings);
    auto results = run_claims(c, claims, n_list, &ctx.clamp);
    json all = json::array();
    for (const auto& r : results) {
        if (r.report) ctx.write(r.id + "_trend.csv", trend_csv(*r.report));
        all.push_back(to_json(r));
    }
    ctx.write("verify.json", json{{"case", c.name}, {"n", n_list}, {"claims", all}}.dump(2) + "\n");
    write_manifest(c, ctx, n_list.empty() ? 0 : n_list.back());
    return results;
}

/// Writes `table_imag.csv` and `table.json` for the n values not above `max_n`.
inline ImagTable command_table(const ExperimentConfig& c, const std::vector<std::size_t>& n_list, std::size_t max_n,
                               const std::filesystem::path& out_root) {
    std::vector<std::size_t> kept;
    for (std::size_t n : n_list)
        if (n <= max_n) kept.push_back(n);
    if (kept.empty()) throw ValidationError("no n value is within --max-n " + std::to_string(max_n), "/n_list");
    RunContext ctx{out_root / c.name, "table", {}, {}, {}};
    symbol_diagnostics(c, ctx.warnings);
    const ImagTable table = table_imaginary_decay(c.symbol, kept, c.quadrature_resolution);
    ctx.write("table_imag.csv", table_csv(table));
    ctx.write("table.json", json{{"case", c.name},
                                 {"n", table.n_values},
                                 {"max_abs_imag", table.max_abs_imag},
                                 {"slope", optional_number(table.slope)},
                                 {"exact", table.exact}}
                                    .dump(2) +
                                "\n");
    write_manifest(c, ctx, kept.back());
    return table;
}

}  // namespace bts
