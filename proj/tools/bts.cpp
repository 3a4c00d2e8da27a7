// bts: run cases, verify claims and build the imaginary-part table.
//
//   bts run    --config cases/case1.json [--out DIR]
//   bts verify --config cases/case1.json --claims thm1,circ [--n 32,64,128,256] [--out DIR]
//   bts table  --config cases/case4.json [--n 24,48,...] [--max-n 384] [--out DIR]
//
// Exit status: 0 ok, 2 validation error, 3 numerical failure. Errors are
// written to stderr as one JSON object.

#include <bts/experiment.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

int report_error(const std::string& kind, const std::string& message, const std::string& pointer, int code) {
    bts::json err{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
    if (!pointer.empty()) err["error"]["pointer"] = pointer;
    std::cerr << err.dump() << std::endl;
    return code;
}

std::string claim_summary(const bts::ClaimResult& r) {
    if (!r.report) return r.id + ": refused (" + r.refused + ")";
    std::string line = r.id + ": " + std::string(bts::to_string(r.report->verdict));
    if (r.report->exact) line += " (exact)";
    if (!r.report->assessed) line += " (informational)";
    if (!r.report->hypothesis_satisfied) line += " (outside hypothesis)";
    if (r.report->slope) line += ", slope " + bts::format_number(*r.report->slope);
    return line;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral experiments for block matrices with Toeplitz blocks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> claims;
    std::vector<std::size_t> n_list;
    std::size_t max_n = 384;

    auto* run = app.add_subcommand("run", "spectra, distribution metrics and manifest for a case");
    run->add_option("--config", config_path, "case config (JSON)")->required();
    run->add_option("--out", out_dir, "output root (default: config output_dir)");

    auto* verify = app.add_subcommand("verify", "residual sweeps for the approximation claims");
    verify->add_option("--config", config_path, "case config (JSON)")->required();
    verify->add_option("--claims", claims, "claim ids: circ, lemma2, lemma3, cor1, thm1")
        ->required()
        ->delimiter(',');
    verify->add_option("--n", n_list, "n values (default 32,64,128,256)")->delimiter(',');
    verify->add_option("--out", out_dir, "output root (default: config output_dir)");

    auto* table = app.add_subcommand("table", "max |Im lambda| of A_n per n with fitted slope");
    table->add_option("--config", config_path, "case config (JSON)")->required();
    table->add_option("--n", n_list, "n values (default 24,48,96,192,384,768,1536)")->delimiter(',');
    table->add_option("--max-n", max_n, "skip n above this cap")->capture_default_str();
    table->add_option("--out", out_dir, "output root (default: config output_dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report_error("usage", e.what(), "", 2);
    }

    try {
        const bts::ExperimentConfig config = bts::load_config(config_path);
        const std::filesystem::path root = out_dir.empty() ? std::filesystem::path(config.output_dir) : std::filesystem::path(out_dir);

        if (run->parsed()) {
            // Claim sweeps requested by the config run first so the run manifest is written last.
            if (!config.outputs.verify.empty())
                for (const auto& r : bts::command_verify(config, config.outputs.verify, {32, 64, 128, 256}, root))
                    std::cout << claim_summary(r) << '\n';
            const auto artifacts = bts::run_case(config, root);
            for (const auto& m : artifacts.metrics)
                std::cout << "n=" << m.n << " max|Im|=" << bts::format_number(m.max_abs_imag)
                          << " W1=" << bts::format_number(m.comparison.wasserstein1) << '\n';
            std::cout << "wrote " << artifacts.directory.string() << '\n';
        } else if (verify->parsed()) {
            if (n_list.empty()) n_list = {32, 64, 128, 256};
            for (const auto& r : bts::command_verify(config, claims, n_list, root))
                std::cout << claim_summary(r) << '\n';
            std::cout << "wrote " << (root / config.name).string() << '\n';
        } else {
            if (n_list.empty()) n_list = {24, 48, 96, 192, 384, 768, 1536};
            const auto t = bts::command_table(config, n_list, max_n, root);
            for (std::size_t i = 0; i < t.n_values.size(); ++i)
                std::cout << t.n_values[i] << ' ' << bts::format_number(t.max_abs_imag[i]) << '\n';
            std::cout << "slope " << (t.slope ? bts::format_number(*t.slope) : std::string("undefined")) << '\n';
        }
    } catch (const bts::ValidationError& e) {
        return report_error("validation", e.what(), e.pointer(), 2);
    } catch (const bts::NumericalError& e) {
        return report_error("numerical", e.what(), "", 3);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), "", 3);
    }
    return 0;
}
