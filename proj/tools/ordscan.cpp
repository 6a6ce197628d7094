#include "ordscan/ordscan.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int cmd_scan(const std::string& curve_file, uint32_t pmin, uint32_t pmax, int workers, const std::string& out,
             const std::string& cache, bool force) {
    auto [curve, d] = ordscan::parse_curve_file(curve_file);
    ordscan::ScanConfig config{curve, d, pmin, pmax, workers, out, cache, force};
    ordscan::ScanResult result = ordscan::run_scan(config);
    long good = 0, split = 0, ordinary = 0;
    for (const auto& rec : result.records) {
        if (!rec.good) continue;
        ++good;
        if (rec.kind == ordscan::SplitKind::Split) ++split;
        if (rec.ordinary && *rec.ordinary) ++ordinary;
    }
    std::cout << "scanned " << result.records.size() << " primes in [" << pmin << ", " << pmax << "]: " << good << " good, " << split
              << " split, " << ordinary << " ordinary\n";
    if (!out.empty()) {
        std::filesystem::path json_path(out);
        json_path.replace_extension(".json");
        std::cout << "wrote " << out << " and " << json_path.string() << "\n";
    } else {
        std::cout << result.csv;
    }
    return 0;
}

int cmd_oracle_weil(uint64_t q, int g) {
    ordscan::WeilEnum we = ordscan::enumerate_weil(q, g);
    for (const auto& L : we.polys) std::cout << L.to_string() << "\n";
    std::cout << we.polys.size() << " Weil polynomials for q = " << q << ", g = " << g << "\n";
    return 0;
}

int cmd_oracle_refinement(uint64_t q, int g) {
    ordscan::RefinementReport rep = ordscan::refinement_forcing_check(q, g);
    std::cout << "q = " << rep.q << ", g = " << rep.g << ": " << rep.total << " Weil polynomials, " << rep.premise_count
              << " with all pairwise root products q, " << rep.counterexamples << " counterexamples\n";
    if (rep.q_square) std::cout << "q is a square: the forced shapes (T -+ sqrt(q))^" << 2 * rep.g << " are admissible\n";
    else std::cout << "q is not a square: the premise set must be empty\n";
    for (const auto& L : rep.premise_polys) std::cout << "premise: " << L.to_string() << "\n";
    return rep.counterexamples == 0 ? 0 : 3;
}

int cmd_oracle_cm(uint32_t p, int copies) {
    std::vector<ordscan::CmEntry> entries;
    ordscan::CurveSpec curve = ordscan::CurveSpec::elliptic({ordscan::BigInt(1), 0, 0, ordscan::BigInt(1)});
    for (int i = 0; i < copies; ++i) entries.push_back({curve, 3});
    ordscan::CmReport rep = ordscan::cm_baseline(entries, p);
    for (size_t i = 0; i < rep.factors.size(); ++i) {
        const auto& fr = rep.factors[i];
        std::cout << "factor " << (i + 1) << ": " << ordscan::to_string(fr.kind) << ", a_p = " << fr.a_p << ", u = " << fr.u
                  << (fr.ordinary ? ", ordinary" : ", not ordinary") << "\n";
    }
    std::cout << "product: u = " << rep.u_product << " (sum of factors " << rep.u_sum << ", additivity "
              << (rep.additivity_ok ? "ok" : "FAILED") << ", assertions " << (rep.assertions_ok ? "ok" : "FAILED") << ")\n";
    return (rep.additivity_ok && rep.assertions_ok) ? 0 : 3;
}

int cmd_report(const std::string& csv_path, const std::string& curve_file, uint32_t pmin, uint32_t pmax, const std::string& out) {
    auto [curve, d] = ordscan::parse_curve_file(curve_file);
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open CSV: " + csv_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string csv = buf.str();
    if (pmin == 0 || pmax == 0) {
        // derive the range from the rows when not given
        std::istringstream ls(csv);
        std::string line;
        std::getline(ls, line);
        uint32_t lo = 0, hi = 0;
        while (std::getline(ls, line)) {
            if (line.empty()) continue;
            uint32_t p = static_cast<uint32_t>(std::stoul(line.substr(0, line.find(','))));
            if (lo == 0) lo = p;
            hi = p;
        }
        if (pmin == 0) pmin = lo;
        if (pmax == 0) pmax = hi;
    }
    std::string json = ordscan::summarize_csv(csv, curve, d, pmin, pmax).dump(2) + "\n";
    if (out.empty()) std::cout << json;
    else {
        std::ofstream of(out, std::ios::binary);
        of << json;
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordscan: ordinary primes of curves with quadratic multiplications"};
    app.require_subcommand(1);

    auto* scan = app.add_subcommand("scan", "classify every prime in a range for a configured curve");
    std::string curve_file, out, cache;
    uint32_t pmin = 5, pmax = 0;
    int workers = 0;
    bool force = false;
    scan->add_option("--curve", curve_file, "curve configuration file")->required();
    scan->add_option("--pmin", pmin, "lower scan bound (>= 5)");
    scan->add_option("--pmax", pmax, "upper scan bound")->required();
    scan->add_option("--workers", workers, "worker threads (0 = hardware)");
    scan->add_option("--out", out, "CSV output path (JSON report written alongside)");
    scan->add_option("--cache", cache, "per-prime cache directory");
    scan->add_flag("--force", force, "lift the genus-dependent pmax cap");

    auto* oracle = app.add_subcommand("oracle", "brute-force oracles over small Weil polynomials");
    oracle->require_subcommand(1);
    auto* weil = oracle->add_subcommand("weil", "exhaustively enumerate Weil polynomials");
    uint64_t oq = 2;
    int og = 1;
    weil->add_option("--q", oq, "prime power")->required();
    weil->add_option("--g", og, "half degree (1..3)")->required();
    auto* refinement = oracle->add_subcommand("refinement", "eigenvalue-forcing check on the wedge square");
    uint64_t rq = 4;
    int rg = 3;
    refinement->add_option("--q", rq, "prime power")->required();
    refinement->add_option("--g", rg, "half degree (>= 3)")->required();
    auto* cm = oracle->add_subcommand("cm", "CM elliptic baseline at one prime");
    uint32_t cp = 7;
    int copies = 3;
    cm->add_option("--p", cp, "prime")->required();
    cm->add_option("--copies", copies, "number of identical CM factors");

    auto* report = app.add_subcommand("report", "re-summarize an existing scan CSV");
    std::string rcsv, rcurve, rout;
    uint32_t rpmin = 0, rpmax = 0;
    report->add_option("--csv", rcsv, "scan CSV path")->required();
    report->add_option("--curve", rcurve, "curve configuration file")->required();
    report->add_option("--pmin", rpmin, "range lower bound recorded in the report");
    report->add_option("--pmax", rpmax, "range upper bound recorded in the report");
    report->add_option("--out", rout, "JSON output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*scan) return cmd_scan(curve_file, pmin, pmax, workers, out, cache, force);
        if (*weil) return cmd_oracle_weil(oq, og);
        if (*refinement) return cmd_oracle_refinement(rq, rg);
        if (*cm) return cmd_oracle_cm(cp, copies);
        if (*report) return cmd_report(rcsv, rcurve, rpmin, rpmax, rout);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
