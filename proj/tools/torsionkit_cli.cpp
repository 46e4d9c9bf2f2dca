#include "torsionkit/analysis.hpp"
#include "torsionkit/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<tk::Rational> parse_omega(const std::string& text) {
    std::vector<tk::Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(tk::parse_rational(item));
        } catch (const std::exception& e) {
            throw tk::ValidationError("--omega", e.what());
        }
    }
    if (out.empty()) throw tk::ValidationError("--omega", "expected a comma separated list of rationals");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Algebraic torsion and ECH invariants for combinatorial contact 3-manifold models"};
    std::string input, command = "validate", format = "text", action, omega, output;
    int hbar = -1, cover = -1, box = -1, certify = -1;
    std::uint64_t seed = 0;
    app.add_option("--input", input, "JSON document (or an earlier json report for validate)")->required();
    app.add_option("--command", command, "validate | torsion | ech-f | enumerate | morse")
        ->check(CLI::IsMember(tk::commands()));
    app.add_option("--action-bound", action, "action truncation T (rational, e.g. 5 or 9/2)");
    app.add_option("--hbar-bound", hbar, "hbar truncation N");
    app.add_option("--cover-max", cover, "largest orbit cover");
    app.add_option("--exponent-box", box, "group ring exponent box");
    app.add_option("--omega", omega, "twisting functional, comma separated rationals");
    app.add_option("--certify-k", certify, "order at which to attempt the lower bound certificate");
    app.add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", seed, "seed for randomized property sampling");
    app.add_option("--output", output, "write the report here instead of stdout");
    CLI11_PARSE(app, argc, argv);

    tk::Json report;
    int code = tk::exit_ok;
    try {
        tk::RunOptions opts;
        opts.seed = seed;
        if (!action.empty()) {
            try {
                opts.action_bound = tk::parse_rational(action);
            } catch (const std::exception& e) {
                throw tk::ValidationError("--action-bound", e.what());
            }
        }
        if (hbar >= 0) opts.hbar_bound = hbar;
        if (cover >= 0) opts.cover_max = cover;
        if (box >= 0) opts.exponent_box = box;
        if (certify >= 0) opts.certify_k = certify;
        if (!omega.empty()) opts.omega = parse_omega(omega);

        std::ifstream in(input);
        if (!in) throw tk::ValidationError("--input", "cannot open " + input);
        tk::Json doc;
        try {
            doc = tk::Json::parse(in);
        } catch (const tk::Json::parse_error& e) {
            throw tk::ValidationError("", std::string("malformed JSON: ") + e.what());
        }
        report = tk::run_analysis(doc, command, opts);
    } catch (const std::exception& e) {
        auto [r, c] = tk::error_report(command, e);
        report = r;
        code = c;
        std::cerr << "torsionkit: " << e.what() << "\n";
    }

    const std::string text = format == "json" ? report.dump(2) + "\n" : tk::render_text(report);
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output);
        out << text;
    }
    return code;
}
