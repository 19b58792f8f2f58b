#include "sgf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sgf/errors.hpp"
#include "sgf/laws.hpp"

namespace sgf {

namespace {

using json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct RawRow {
    DataPoint point;
    std::size_t line;
};

double required_number(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(std::string("params document lacks '") + key + "'");
    if (!it->is_number()) throw InvalidInput(std::string("'") + key + "' must be a number");
    return it->get<double>();
}

}  // namespace

AxisNormalization parse_normalization(std::string_view name) {
    if (name == "none") return AxisNormalization::None;
    if (name == "first-to-one") return AxisNormalization::FirstToOne;
    if (name == "range-1-100") return AxisNormalization::Range1To100;
    throw InvalidInput("unknown normalization '" + std::string(name) +
                       "' (expected none, first-to-one or range-1-100)");
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

Dataset parse_dataset(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<RawRow> rows;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;

        const auto comma = view.find(',');
        if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError(line_no, "expected exactly two comma-separated cells");
        }
        const auto first = trim(view.substr(0, comma));
        const auto second = trim(view.substr(comma + 1));

        if (!have_header) {
            if (first != "n" || second != "x") throw ParseError(line_no, "missing header 'n,x'");
            have_header = true;
            continue;
        }
        const auto n = parse_double(first);
        const auto x = parse_double(second);
        if (!n) throw ParseError(line_no, "non-numeric n '" + std::string(first) + "'");
        if (!x) throw ParseError(line_no, "non-numeric x '" + std::string(second) + "'");
        if (!std::isfinite(*n) || !std::isfinite(*x)) throw ParseError(line_no, "non-finite value");
        if (!(*n > 0.0)) throw ParseError(line_no, "system size must be positive");
        rows.push_back(RawRow{{*n, *x}, line_no});
    }
    if (!have_header) throw ParseError(std::max<std::size_t>(line_no, 1), "missing header 'n,x'");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const RawRow& a, const RawRow& b) { return a.point.n < b.point.n; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].point.n == rows[i - 1].point.n) {
            throw ParseError(std::max(rows[i].line, rows[i - 1].line), "duplicate n");
        }
    }
    if (rows.size() < 2) throw ParseError(line_no, "dataset needs at least 2 rows");

    Dataset data;
    for (const auto& r : rows) data.points.push_back(r.point);
    return data;
}

Dataset parse_dataset(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_dataset(in);
}

std::string serialize_dataset(const Dataset& data) {
    std::string out = "n,x\n";
    for (const auto& p : data.points) {
        out += format_double(p.n) + "," + format_double(p.x) + "\n";
    }
    return out;
}

Dataset normalize_axis(const Dataset& data, AxisNormalization mode) {
    data.validate();
    Dataset out = data;
    const double first = data.points.front().n;
    const double last = data.points.back().n;
    switch (mode) {
        case AxisNormalization::None:
            break;
        case AxisNormalization::FirstToOne:
            for (auto& p : out.points) p.n = p.n / first;
            break;
        case AxisNormalization::Range1To100: {
            if (first == last) throw DomainError("degenerate range: first and last n coincide");
            const double scale = 99.0 / (last - first);
            for (auto& p : out.points) p.n = 1.0 + (p.n - first) * scale;
            out.points.back().n = 100.0;
            break;
        }
    }
    return out;
}

std::string params_to_json(const ParamsDocument& doc, int indent) {
    json j;
    const auto k = doc.rates.as_array();
    for (std::size_t i = 0; i < k.size(); ++i) j["k" + std::to_string(i + 1)] = k[i];
    j["c_s"] = doc.contribution.c_s;
    j["c_g"] = doc.contribution.c_g;
    if (!doc.label.empty()) j["label"] = doc.label;
    if (!doc.provenance.empty()) j["provenance"] = doc.provenance;
    return j.dump(indent) + "\n";
}

ParamsDocument params_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed params JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInput("params document must be a JSON object");

    ParamsDocument doc;
    std::array<double, 7> k{};
    for (std::size_t i = 0; i < k.size(); ++i) {
        k[i] = required_number(j, ("k" + std::to_string(i + 1)).c_str());
    }
    doc.rates = Rates::from_array(k);
    doc.contribution.c_s = required_number(j, "c_s");
    doc.contribution.c_g = j.contains("c_g") ? required_number(j, "c_g") : 0.0;
    if (j.contains("label") && j["label"].is_string()) doc.label = j["label"].get<std::string>();
    if (j.contains("provenance") && j["provenance"].is_string())
        doc.provenance = j["provenance"].get<std::string>();
    doc.rates.validate();
    doc.contribution.validate();
    return doc;
}

std::vector<CurveRow> curve_rows(const SweepResult& sweep) {
    std::vector<CurveRow> out;
    out.reserve(sweep.rows.size());
    for (const auto& r : sweep.rows) {
        out.push_back(CurveRow{r.n, r.s_star, r.g_star, r.f_star, r.throughput, r.speedup});
    }
    return out;
}

std::string curve_csv(const std::vector<CurveRow>& rows) {
    std::string out = "n,s,g,f,x,speedup\n";
    for (const auto& r : rows) {
        out += format_double(r.n) + "," + format_double(r.s) + "," + format_double(r.g) + "," +
               format_double(r.f) + "," + format_double(r.throughput) + "," +
               (r.speedup ? format_double(*r.speedup) : std::string()) + "\n";
    }
    return out;
}

std::string ssa_stats_csv(const EnsembleStats& stats) {
    std::string out = "t,mean_s,mean_g,mean_f,var_s,var_g,var_f\n";
    for (const auto& sm : stats.samples) {
        out += format_double(sm.t);
        for (double v : sm.mean) out += "," + format_double(v);
        for (double v : sm.variance) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

std::string fixed_point_json(const FixedPoint& fp, const Contribution& c) {
    json j;
    j["n"] = fp.n;
    j["s"] = fp.s_star;
    j["g"] = fp.g_star;
    j["f"] = fp.f_star;
    j["stability"] = to_string(fp.stability);
    j["residual"] = fp.residual;
    j["throughput"] = throughput(fp, c);
    if (c.c_s > 0.0) {
        j["speedup"] = speedup(fp, c);
    } else {
        j["speedup"] = nullptr;
    }
    j["accepted_steps"] = fp.diagnostics.accepted_steps;
    j["t_final"] = fp.diagnostics.t_final;
    return j.dump(2) + "\n";
}

std::string fit_result_json(const FitResult& fit, const std::string& label) {
    ParamsDocument doc{fit.rates, fit.contribution, label, "fit"};
    json j = json::parse(params_to_json(doc));
    j["mse"] = fit.mse;
    j["generations"] = fit.generations_used;
    j["converged"] = fit.converged;
    j["evaluations"] = fit.objective_evaluations;
    return j.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw IoError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into '" + path.string() + "'");
    }
}

std::filesystem::path resolve_output_path(const std::filesystem::path& path) {
    if (path.is_absolute()) return path;
    const char* dir = std::getenv("SGF_OUTPUT_DIR");
    if (dir == nullptr || *dir == '\0') return path;
    return std::filesystem::path(dir) / path;
}

}  // namespace sgf
