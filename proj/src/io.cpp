#include "eignets/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eignets::io {

namespace {

using nlohmann::json;

std::string escape_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void write_json(const std::filesystem::path& file, const json& j) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    os << j.dump(2) << "\n";
}

std::vector<std::string> coord_header(const manifold& m) {
    if (m.kind() == domain_kind::circle) return {"theta"};
    return {"colatitude", "longitude"};
}

std::vector<std::string> coord_fields(const point& p) {
    if (p.dom == domain_kind::circle) return {format_double(p.a)};
    return {format_double(p.a), format_double(p.b)};
}

point parse_point(const manifold& m, const std::vector<std::string>& row, std::size_t offset) {
    if (m.kind() == domain_kind::circle) return circle_point(std::stod(row.at(offset)));
    return sphere_point(std::stod(row.at(offset)), std::stod(row.at(offset + 1)));
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    auto put_row = [&os](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << escape_field(row[i]);
        }
        os << "\r\n";
    };
    if (!header.empty()) put_row(header);
    for (const auto& row : rows) put_row(row);
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& file,
                                               std::vector<std::string>* header) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + file.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
                else if (c == '"') quoted = false;
                else cur += c;
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
        if (first && header) {
            *header = fields;
            first = false;
            continue;
        }
        first = false;
        rows.push_back(std::move(fields));
    }
    return rows;
}

void write_point_set(const std::filesystem::path& file, const point_set& c) {
    std::vector<std::vector<std::string>> rows;
    for (const point& p : c.points()) rows.push_back(coord_fields(p));
    write_csv(file, coord_header(c.mfd()), rows);
}

point_set read_point_set(const std::filesystem::path& file,
                         const std::shared_ptr<const manifold>& m) {
    std::vector<std::string> header;
    const auto rows = read_csv(file, &header);
    std::vector<point> pts;
    for (const auto& row : rows) pts.push_back(parse_point(*m, row, 0));
    return {m, std::move(pts)};
}

void write_rule(const std::filesystem::path& csv_file, const std::filesystem::path& cert_file,
                const quadrature_rule& rule) {
    std::vector<std::string> header = coord_header(rule.centers().mfd());
    header.push_back("weight");
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        auto row = coord_fields(rule.centers()[i]);
        row.push_back(format_double(rule.weights()[i]));
        rows.push_back(std::move(row));
    }
    write_csv(csv_file, header, rows);

    json cert;
    cert["manifold"] = std::string(rule.centers().mfd().name());
    cert["points"] = rule.size();
    cert["certified_order"] = rule.certified_order();
    cert["residual"] = rule.residual();
    cert["method"] = rule.method_name();
    cert["weight_bound_const"] = rule.weight_bound_const();
    cert["regularity"] = {{"d", rule.regularity_d()}, {"norm", rule.regularity_norm_est()}};
    write_json(cert_file, cert);
}

quadrature_rule read_rule(const std::filesystem::path& csv_file,
                          const std::shared_ptr<const manifold>& m) {
    std::vector<std::string> header;
    const auto rows = read_csv(csv_file, &header);
    const std::size_t coords = m->kind() == domain_kind::circle ? 1 : 2;
    std::vector<point> pts;
    std::vector<double> w;
    for (const auto& row : rows) {
        pts.push_back(parse_point(*m, row, 0));
        w.push_back(std::stod(row.at(coords)));
    }
    return {point_set(m, std::move(pts)), std::move(w)};
}

void write_spectral(const std::filesystem::path& file, const spectral_vector& f) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t j = 0; j < f.size(); ++j)
        rows.push_back({std::to_string(j), format_double(f.mfd().level(j)), format_double(f[j])});
    write_csv(file, {"index", "level", "coefficient"}, rows);
}

spectral_vector read_spectral(const std::filesystem::path& file,
                              const std::shared_ptr<const manifold>& m) {
    std::vector<std::string> header;
    const auto rows = read_csv(file, &header);
    std::vector<double> c;
    for (const auto& row : rows) {
        const std::size_t j = std::stoul(row.at(0));
        if (j >= c.size()) c.resize(j + 1, 0.0);
        c[j] = std::stod(row.at(2));
    }
    return {m, std::move(c)};
}

void write_eignet(const std::filesystem::path& csv_file, const std::filesystem::path& header_file,
                  const eignet& net) {
    std::vector<std::string> header = coord_header(net.centers().mfd());
    header.push_back("coefficient");
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < net.centers().size(); ++i) {
        auto row = coord_fields(net.centers()[i]);
        row.push_back(format_double(net.coeffs()[static_cast<Eigen::Index>(i)]));
        rows.push_back(std::move(row));
    }
    write_csv(csv_file, header, rows);

    json hdr;
    hdr["manifold"] = std::string(net.kernel().mfd().name());
    hdr["beta"] = net.kernel().b().beta();
    hdr["kernel_trunc"] = net.kernel().trunc_level();
    hdr["tail_bound"] = net.kernel().tail_bound();
    hdr["synth_level"] = net.synth_level();
    hdr["centers"] = net.centers().size();
    write_json(header_file, hdr);
}

void write_rate_report(const std::filesystem::path& csv_file,
                       const std::filesystem::path& json_file, const rate_report& rep,
                       const experiment_config& cfg) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        rows.push_back({format_double(rep.points[i].first), format_double(rep.points[i].second),
                        i < rep.constants.size() ? format_double(rep.constants[i]) : ""});
    }
    write_csv(csv_file, {"scale", "error", "constant"}, rows);

    json sum;
    sum["experiment"] = rep.experiment;
    sum["slope"] = rep.fit.slope;
    sum["intercept"] = rep.fit.intercept;
    sum["fit_residual"] = rep.fit.residual;
    if (!std::isnan(rep.bound_slope)) sum["bound_slope"] = rep.bound_slope;
    sum["pass"] = rep.pass;
    sum["note"] = rep.note;
    sum["config"] = {{"manifold", cfg.manifold}, {"target", cfg.target},
                     {"p", std::isinf(cfg.p) ? json("inf") : json(cfg.p)},
                     {"beta", cfg.beta},       {"r", cfg.r},
                     {"gamma", cfg.gamma},     {"trials", cfg.trials},
                     {"slack", cfg.slack},     {"seed", cfg.seed},
                     {"sweep", cfg.sweep}};
    write_json(json_file, sum);
}

std::pair<point_set, std::vector<double>> read_samples(const std::filesystem::path& file,
                                                       const std::shared_ptr<const manifold>& m) {
    std::vector<std::string> header;
    const auto rows = read_csv(file, &header);
    const std::size_t coords = m->kind() == domain_kind::circle ? 1 : 2;
    std::vector<point> pts;
    std::vector<double> vals;
    for (const auto& row : rows) {
        if (row.size() < coords + 1) throw std::runtime_error("samples row missing value field");
        pts.push_back(parse_point(*m, row, 0));
        vals.push_back(std::stod(row.at(coords)));
    }
    return {point_set(m, std::move(pts)), std::move(vals)};
}

} // namespace eignets::io
