#pragma once

#include "ordscan/bigint.hpp"
#include "ordscan/classify.hpp"
#include "ordscan/curve_counts.hpp"
#include "ordscan/errors.hpp"
#include "ordscan/newton.hpp"
#include "ordscan/quad_field.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace ordscan {

using Json = nlohmann::ordered_json;

/// Scan parameters. The prime caps keep the O(p^genus) counting kernels at
/// desk scale; --force lifts them.
struct ScanConfig {
    CurveSpec curve;
    int d = 3;
    uint32_t pmin = 5;
    uint32_t pmax = 0;
    int workers = 0;        // 0 = hardware concurrency
    std::string out;        // CSV path; the JSON report lands next to it
    std::string cache_dir;  // empty = no cache
    bool force = false;

    static uint32_t default_cap(int genus) { return genus == 1 ? 5000 : genus == 3 ? 300 : 60; }

    void validate() const {
        if (pmin < 5) throw std::invalid_argument("scan: pmin must be at least 5");
        if (pmax < pmin) throw std::invalid_argument("scan: pmax must be at least pmin");
        if (!force && pmax > default_cap(curve.genus))
            throw std::invalid_argument("scan: pmax " + std::to_string(pmax) + " exceeds the genus-" + std::to_string(curve.genus) +
                                        " default cap " + std::to_string(default_cap(curve.genus)) + " (use --force)");
    }
};

/// Curve configuration file: `key = value` lines with '#' comments and the
/// fields model, m, f (ascending integer coefficients), d.
inline std::pair<CurveSpec, int> parse_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open curve file: " + path);
    std::string model, line;
    int m = 0, d = 0;
    std::vector<BigInt> f;
    bool saw_m = false, saw_f = false, saw_d = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto strip = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        if (key == "model") model = val;
        else if (key == "m") {
            m = std::stoi(val);
            saw_m = true;
        } else if (key == "d") {
            d = std::stoi(val);
            saw_d = true;
        } else if (key == "f") {
            std::istringstream fs(val);
            std::string tok;
            f.clear();
            while (fs >> tok) f.emplace_back(tok);
            saw_f = true;
        } else {
            throw std::invalid_argument("curve file: unknown key '" + key + "'");
        }
    }
    if (model.empty() || !saw_m || !saw_f || !saw_d) throw std::invalid_argument("curve file: need model, m, f, d");
    CurveModel cm;
    if (model == "superelliptic") cm = CurveModel::Superelliptic;
    else if (model == "elliptic") cm = CurveModel::Elliptic;
    else throw std::invalid_argument("curve file: model must be superelliptic or elliptic");
    return {CurveSpec::make(cm, m, std::move(f)), d};
}

inline std::string canonical_curve_string(const CurveSpec& curve, int d) {
    std::ostringstream os;
    os << "model=" << (curve.model == CurveModel::Superelliptic ? "superelliptic" : "elliptic") << ";m=" << curve.m << ";f=";
    for (size_t i = 0; i < curve.f.size(); ++i) {
        if (i) os << ",";
        os << curve.f[i];
    }
    os << ";d=" << d;
    return os.str();
}

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

namespace detail {

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

inline std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

inline Json slopes_json(const NewtonPolygon& np) {
    Json arr = Json::array();
    for (const auto& s : np.flat()) arr.push_back(rational_str(s));
    return arr;
}

inline NewtonPolygon slopes_from_json(const Json& arr) {
    NewtonPolygon np;
    for (const auto& item : arr) {
        Rational s(item.get<std::string>());
        if (!np.slopes.empty() && np.slopes.back().first == s) np.slopes.back().second += 1;
        else np.slopes.emplace_back(s, 1);
    }
    return np;
}

inline Json epoly_json(const EPoly& f) {
    Json arr = Json::array();
    for (const auto& c : f.c) arr.push_back(Json::array({c.a.str(), c.b.str()}));
    return arr;
}

inline EPoly epoly_from_json(const Json& arr) {
    EPoly f;
    for (const auto& item : arr) f.c.emplace_back(BigInt(item[0].get<std::string>()), BigInt(item[1].get<std::string>()));
    return f;
}

inline Json optlong_json(const std::optional<long>& v) { return v ? Json(*v) : Json(nullptr); }

inline std::optional<long> optlong_from_json(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<long>();
}

}  // namespace detail

inline constexpr int kCacheVersion = 1;

/// Cache serialization of a PrimeRecord; exact round trip, strings for all
/// unbounded values.
inline Json record_to_json(const PrimeRecord& rec) {
    Json j;
    j["v"] = kCacheVersion;
    j["p"] = rec.p;
    j["kind"] = to_string(rec.kind);
    j["good"] = rec.good;
    if (rec.L) {
        Json coeffs = Json::array();
        for (const auto& c : rec.L->a) coeffs.push_back(c.str());
        j["L"] = coeffs;
        j["g"] = rec.L->g;
    } else {
        j["L"] = nullptr;
    }
    j["p_sigma"] = rec.p_sigma ? detail::epoly_json(*rec.p_sigma) : Json(nullptr);
    j["p_sigmabar"] = rec.p_sigmabar ? detail::epoly_json(*rec.p_sigmabar) : Json(nullptr);
    if (rec.vals) {
        Json v;
        v["a_sigma"] = detail::optlong_json(rec.vals->a_sigma);
        v["a_sigmabar"] = detail::optlong_json(rec.vals->a_sigmabar);
        v["b_sigma"] = detail::optlong_json(rec.vals->b_sigma);
        v["b_sigmabar"] = detail::optlong_json(rec.vals->b_sigmabar);
        v["c_sigma"] = rec.vals->c_sigma;
        v["c_sigmabar"] = rec.vals->c_sigmabar;
        j["vals"] = v;
    } else {
        j["vals"] = nullptr;
    }
    j["slopes_l"] = rec.slopes_l ? detail::slopes_json(*rec.slopes_l) : Json(nullptr);
    j["slopes_sigma"] = rec.slopes_sigma ? detail::slopes_json(*rec.slopes_sigma) : Json(nullptr);
    j["slopes_sigmabar"] = rec.slopes_sigmabar ? detail::slopes_json(*rec.slopes_sigmabar) : Json(nullptr);
    j["u"] = rec.u ? Json(*rec.u) : Json(nullptr);
    j["ordinary"] = rec.ordinary ? Json(*rec.ordinary) : Json(nullptr);
    j["katz"] = rec.katz_infinite ? Json("inf") : (rec.katz ? Json(detail::rational_str(*rec.katz)) : Json(nullptr));
    j["ogus"] = rec.ogus ? Json(*rec.ogus) : Json(nullptr);
    j["itc"] = rec.itc ? Json(*rec.itc) : Json(nullptr);
    j["mechanism"] = to_string(rec.mechanism);
    return j;
}

inline PrimeRecord record_from_json(const Json& j, uint32_t p) {
    if (!j.contains("v") || j["v"].get<int>() != kCacheVersion) throw std::runtime_error("cache entry version mismatch");
    PrimeRecord rec;
    rec.p = j["p"].get<uint32_t>();
    if (rec.p != p) throw std::runtime_error("cache entry prime mismatch");
    std::string kind = j["kind"].get<std::string>();
    rec.kind = kind == "split" ? SplitKind::Split : kind == "inert" ? SplitKind::Inert : SplitKind::Ramified;
    rec.good = j["good"].get<bool>();
    if (!j["L"].is_null()) {
        std::vector<BigInt> coeffs;
        for (const auto& c : j["L"]) coeffs.emplace_back(c.get<std::string>());
        rec.L = LPolynomial(p, j["g"].get<int>(), std::move(coeffs));
    }
    if (!j["p_sigma"].is_null()) rec.p_sigma = detail::epoly_from_json(j["p_sigma"]);
    if (!j["p_sigmabar"].is_null()) rec.p_sigmabar = detail::epoly_from_json(j["p_sigmabar"]);
    if (!j["vals"].is_null()) {
        FactorValuations fv;
        fv.a_sigma = detail::optlong_from_json(j["vals"]["a_sigma"]);
        fv.a_sigmabar = detail::optlong_from_json(j["vals"]["a_sigmabar"]);
        fv.b_sigma = detail::optlong_from_json(j["vals"]["b_sigma"]);
        fv.b_sigmabar = detail::optlong_from_json(j["vals"]["b_sigmabar"]);
        fv.c_sigma = j["vals"]["c_sigma"].get<long>();
        fv.c_sigmabar = j["vals"]["c_sigmabar"].get<long>();
        rec.vals = fv;
    }
    if (!j["slopes_l"].is_null()) rec.slopes_l = detail::slopes_from_json(j["slopes_l"]);
    if (!j["slopes_sigma"].is_null()) rec.slopes_sigma = detail::slopes_from_json(j["slopes_sigma"]);
    if (!j["slopes_sigmabar"].is_null()) rec.slopes_sigmabar = detail::slopes_from_json(j["slopes_sigmabar"]);
    if (!j["u"].is_null()) rec.u = j["u"].get<int>();
    if (!j["ordinary"].is_null()) rec.ordinary = j["ordinary"].get<bool>();
    if (!j["katz"].is_null()) {
        std::string k = j["katz"].get<std::string>();
        if (k == "inf") rec.katz_infinite = true;
        else rec.katz = Rational(k);
    }
    if (!j["ogus"].is_null()) rec.ogus = j["ogus"].get<bool>();
    if (!j["itc"].is_null()) rec.itc = j["itc"].get<bool>();
    std::string mech = j["mechanism"].get<std::string>();
    for (Mechanism m : {Mechanism::TrivialUnitDet, Mechanism::OgusSigma, Mechanism::OgusSigmaBar, Mechanism::BothDivisible,
                        Mechanism::Inert, Mechanism::Bad}) {
        if (mech == to_string(m)) rec.mechanism = m;
    }
    return rec;
}

/// Fixed CSV schema, one row per prime; split-only columns stay empty for
/// inert, ramified and bad primes (and v_b/ogus for genus 1).
inline std::string csv_header(int g) {
    std::ostringstream os;
    os << "p,kind,good";
    for (int i = 1; i <= g; ++i) os << ",a_" << i;
    os << ",ordinary,u,v_a_sigma,v_a_sigmabar,v_b_sigma,v_b_sigmabar,v_c_sigma,v_c_sigmabar,katz_b,ogus,mechanism,slopes";
    return os.str();
}

inline std::string csv_row(const PrimeRecord& rec, int g) {
    std::ostringstream os;
    os << rec.p << "," << to_string(rec.kind) << "," << (rec.good ? 1 : 0);
    for (int i = 1; i <= g; ++i) {
        os << ",";
        if (rec.L) os << rec.L->a[static_cast<size_t>(i)];
    }
    os << ",";
    if (rec.ordinary) os << (*rec.ordinary ? 1 : 0);
    os << ",";
    if (rec.u) os << *rec.u;
    auto opt_val = [&](const std::optional<long>& v, bool present) {
        os << ",";
        if (!present) return;
        if (v) os << *v;
        else os << "inf";
    };
    bool split_cols = rec.vals.has_value();
    opt_val(split_cols ? rec.vals->a_sigma : std::nullopt, split_cols);
    opt_val(split_cols ? rec.vals->a_sigmabar : std::nullopt, split_cols);
    opt_val(split_cols && g >= 2 ? rec.vals->b_sigma : std::nullopt, split_cols && g >= 2);
    opt_val(split_cols && g >= 2 ? rec.vals->b_sigmabar : std::nullopt, split_cols && g >= 2);
    os << ",";
    if (split_cols) os << rec.vals->c_sigma;
    os << ",";
    if (split_cols) os << rec.vals->c_sigmabar;
    os << ",";
    if (split_cols) os << ((rec.katz && *rec.katz <= 1) ? 1 : 0);
    os << ",";
    if (rec.ogus) os << (*rec.ogus ? 1 : 0);
    os << "," << to_string(rec.mechanism) << ",";
    if (rec.slopes_l) os << rec.slopes_l->to_string();
    return os.str();
}

/// Exact fraction rendered to six decimals (round half up); "0.000000" for an
/// empty denominator.
inline std::string fraction_6dp(long num, long den) {
    if (den <= 0) return "0.000000";
    long long scaled = static_cast<long long>(num) * 1000000;
    long long q = scaled / den;
    long long r = scaled % den;
    if (2 * r >= den) ++q;
    std::ostringstream os;
    os << (q / 1000000) << ".";
    os.width(6);
    os.fill('0');
    os << (q % 1000000);
    return os.str();
}

/// Everything the density report needs from one scanned prime; the CSV rows
/// carry exactly this, so re-summarizing a CSV reproduces the report.
struct ReportRow {
    uint32_t p = 0;
    SplitKind kind = SplitKind::Inert;
    bool good = false;
    std::optional<bool> ordinary;
    std::optional<bool> katz_ok;
    std::optional<bool> ogus;
    std::optional<long> v_c_sigma, v_c_sigmabar;
    std::string mechanism;
};

inline ReportRow report_row(const PrimeRecord& rec) {
    ReportRow row;
    row.p = rec.p;
    row.kind = rec.kind;
    row.good = rec.good;
    row.ordinary = rec.ordinary;
    if (rec.vals) {
        row.katz_ok = rec.katz && *rec.katz <= 1;
        row.v_c_sigma = rec.vals->c_sigma;
        row.v_c_sigmabar = rec.vals->c_sigmabar;
    }
    row.ogus = rec.ogus;
    row.mechanism = to_string(rec.mechanism);
    return row;
}

inline Json density_report(const std::vector<ReportRow>& rows, const CurveSpec& curve, int d, uint32_t pmin, uint32_t pmax) {
    Json j;
    j["schema"] = "ordscan-report-v1";
    Json jc;
    jc["model"] = curve.model == CurveModel::Superelliptic ? "superelliptic" : "elliptic";
    jc["m"] = curve.m;
    Json fc = Json::array();
    for (const auto& c : curve.f) fc.push_back(c.str());
    jc["f"] = fc;
    jc["d"] = d;
    jc["genus"] = curve.genus;
    j["curve"] = jc;
    Signature sig = signature(curve);
    j["signature"] = Json{{"r_tau", sig.r_tau}, {"r_taubar", sig.r_taubar}, {"unordered", {sig.unordered().first, sig.unordered().second}}};
    j["range"] = Json{{"pmin", pmin}, {"pmax", pmax}};

    long good = 0, bad = 0;
    long kind_total[3] = {0, 0, 0};     // good primes per kind
    long kind_ordinary[3] = {0, 0, 0};
    long ordinary_total = 0;
    std::vector<uint32_t> katz_bad, ogus_bad, itc_bad;
    std::map<std::string, long> mech;
    for (Mechanism m : {Mechanism::TrivialUnitDet, Mechanism::OgusSigma, Mechanism::OgusSigmaBar, Mechanism::BothDivisible,
                        Mechanism::Inert, Mechanism::Bad})
        mech[to_string(m)] = 0;

    auto want = sig.unordered();
    for (const auto& row : rows) {
        mech[row.mechanism]++;
        if (!row.good) {
            ++bad;
            continue;
        }
        ++good;
        int k = row.kind == SplitKind::Split ? 0 : row.kind == SplitKind::Inert ? 1 : 2;
        ++kind_total[k];
        if (row.ordinary && *row.ordinary) {
            ++kind_ordinary[k];
            ++ordinary_total;
        }
        if (row.kind == SplitKind::Split) {
            if (!row.katz_ok || !*row.katz_ok) katz_bad.push_back(row.p);
            if (row.ogus && !*row.ogus) ogus_bad.push_back(row.p);
            if (row.v_c_sigma && row.v_c_sigmabar) {
                std::pair<long, long> got{std::min(*row.v_c_sigma, *row.v_c_sigmabar), std::max(*row.v_c_sigma, *row.v_c_sigmabar)};
                if (got != std::pair<long, long>{want.first, want.second}) itc_bad.push_back(row.p);
            }
        }
    }

    j["totals"] = Json{{"primes", static_cast<long>(rows.size())}, {"good", good},        {"bad", bad},
                       {"split", kind_total[0]},                   {"inert", kind_total[1]}, {"ramified", kind_total[2]}};
    auto frac_block = [&](long count, long total) {
        return Json{{"count", count}, {"total", total}, {"fraction", fraction_6dp(count, total)}};
    };
    j["ordinary"] = Json{{"split", frac_block(kind_ordinary[0], kind_total[0])},
                         {"inert", frac_block(kind_ordinary[1], kind_total[1])},
                         {"ramified", frac_block(kind_ordinary[2], kind_total[2])},
                         {"overall", frac_block(ordinary_total, good)}};
    j["katz"] = Json{{"violations", static_cast<long>(katz_bad.size())}, {"violating_primes", katz_bad}};
    j["ogus"] = Json{{"failures", static_cast<long>(ogus_bad.size())}, {"failing_primes", ogus_bad}};
    j["infinity_type"] = Json{{"expected", {want.first, want.second}},
                              {"failures", static_cast<long>(itc_bad.size())},
                              {"failing_primes", itc_bad}};
    j["mechanisms"] = mech;
    return j;
}

struct ScanResult {
    std::vector<PrimeRecord> records;
    std::string csv;
    std::string json;
};

namespace detail {

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::create_directories(path.parent_path());
    std::ostringstream tmp_name;
    tmp_name << path.filename().string() << ".tmp." << std::this_thread::get_id();
    fs::path tmp = path.parent_path() / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary);
        out << content;
    }
    fs::rename(tmp, path);
}

}  // namespace detail

/// Classifies every prime in range with a bounded worker pool; records merge
/// in ascending-p order regardless of completion order, so output bytes do
/// not depend on the worker count. The per-prime cache is keyed by the curve
/// hash and written atomically.
inline ScanResult run_scan(const ScanConfig& config) {
    config.validate();
    namespace fs = std::filesystem;
    const QuadField E(config.d);
    const auto primes = [&] {
        std::vector<uint32_t> out;
        for (uint32_t p : primes_up_to(config.pmax))
            if (p >= config.pmin) out.push_back(p);
        return out;
    }();

    fs::path cache_base;
    if (!config.cache_dir.empty()) {
        cache_base = fs::path(config.cache_dir) / ("curve-" + detail::hex64(fnv1a64(canonical_curve_string(config.curve, config.d))));
        fs::create_directories(cache_base);
    }

    std::vector<PrimeRecord> records(primes.size());
    std::vector<std::exception_ptr> errors(primes.size());
    std::atomic<size_t> next{0};
    int workers = config.workers > 0 ? config.workers : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, static_cast<int>(primes.size()) > 0 ? static_cast<int>(primes.size()) : 1);

    auto work = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= primes.size()) return;
            uint32_t p = primes[i];
            try {
                fs::path entry;
                if (!cache_base.empty()) {
                    entry = cache_base / ("p" + std::to_string(p) + ".json");
                    if (fs::exists(entry)) {
                        std::ifstream in(entry);
                        Json j = Json::parse(in);
                        records[i] = record_from_json(j, p);
                        continue;
                    }
                }
                records[i] = classify_prime(config.curve, E, p);
                if (!cache_base.empty()) detail::atomic_write(entry, record_to_json(records[i]).dump(2) + "\n");
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (size_t i = 0; i < errors.size(); ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);

    ScanResult result;
    std::ostringstream csv;
    csv << csv_header(config.curve.genus) << "\n";
    std::vector<ReportRow> rows;
    rows.reserve(records.size());
    for (const auto& rec : records) {
        csv << csv_row(rec, config.curve.genus) << "\n";
        rows.push_back(report_row(rec));
    }
    result.csv = csv.str();
    result.json = density_report(rows, config.curve, config.d, config.pmin, config.pmax).dump(2) + "\n";
    result.records = std::move(records);

    if (!config.out.empty()) {
        fs::path csv_path(config.out);
        if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
        std::ofstream(csv_path, std::ios::binary) << result.csv;
        fs::path json_path = csv_path;
        json_path.replace_extension(".json");
        std::ofstream(json_path, std::ios::binary) << result.json;
    }
    return result;
}

/// Re-summarizes an existing scan CSV into the density report; needs the
/// curve for the signature-dependent fields. Byte-identical to the report the
/// scan wrote.
inline Json summarize_csv(const std::string& csv_text, const CurveSpec& curve, int d, uint32_t pmin, uint32_t pmax) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("summarize_csv: empty input");
    if (line != csv_header(curve.genus)) throw std::invalid_argument("summarize_csv: header does not match the expected schema");
    const int g = curve.genus;
    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        cells.resize(static_cast<size_t>(g) + 14);  // tolerate the trailing empty slopes cell
        ReportRow row;
        row.p = static_cast<uint32_t>(std::stoul(cells[0]));
        row.kind = cells[1] == "split" ? SplitKind::Split : cells[1] == "inert" ? SplitKind::Inert : SplitKind::Ramified;
        row.good = cells[2] == "1";
        size_t base = 3 + static_cast<size_t>(g);
        if (!cells[base].empty()) row.ordinary = cells[base] == "1";
        size_t vc = base + 6;  // v_c_sigma
        if (!cells[vc].empty()) row.v_c_sigma = std::stol(cells[vc]);
        if (!cells[vc + 1].empty()) row.v_c_sigmabar = std::stol(cells[vc + 1]);
        if (!cells[vc + 2].empty()) row.katz_ok = cells[vc + 2] == "1";
        if (!cells[vc + 3].empty()) row.ogus = cells[vc + 3] == "1";
        row.mechanism = cells[vc + 4];
        rows.push_back(row);
    }
    return density_report(rows, curve, d, pmin, pmax);
}

}  // namespace ordscan
