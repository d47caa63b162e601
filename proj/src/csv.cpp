#include "twoseq/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "twoseq/error.hpp"

namespace twoseq {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double to_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw IoError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
}

}  // namespace

void write_sim_csv(std::ostream& out, const std::vector<SimRow>& rows) {
    out << kSimCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.n << ',' << g17(r.beta) << ',' << g17(r.epsilon) << ',' << r.a.to_string() << ','
            << r.b.to_string() << ',' << g17(r.sigma) << ',' << to_string(r.estimator) << ','
            << r.replications << ',' << g17(r.mse) << ',' << g17(r.mse_stderr) << ','
            << g17(r.mean_estimate) << ',' << g17(r.true_q) << ',' << r.seed << '\n';
    }
}

std::vector<SimRow> read_sim_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || chomp(line) != kSimCsvHeader)
        throw IoError("unexpected simulation CSV header");
    std::vector<SimRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = chomp(line);
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 13)
            throw IoError("line " + std::to_string(line_no) + ": expected 13 fields");
        try {
            SimRow r;
            r.n = std::stoll(f[0]);
            r.beta = to_double(f[1], line_no);
            r.epsilon = to_double(f[2], line_no);
            r.a = SignalStrength::parse(f[3]);
            r.b = SignalStrength::parse(f[4]);
            r.sigma = to_double(f[5], line_no);
            r.estimator = parse_estimator(f[6]);
            r.replications = std::stoi(f[7]);
            r.mse = to_double(f[8], line_no);
            r.mse_stderr = to_double(f[9], line_no);
            r.mean_estimate = to_double(f[10], line_no);
            r.true_q = to_double(f[11], line_no);
            r.seed = std::stoull(f[12]);
            rows.push_back(r);
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            throw IoError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

void write_sim_csv_file(const std::string& path, const std::vector<SimRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_sim_csv(out, rows);
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<SimRow> read_sim_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_sim_csv(in);
}

ObservationPair read_pairs_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || chomp(line) != "x,y")
        throw IoError("pairs file must start with header 'x,y'");
    ObservationPair obs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = chomp(line);
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 2) throw IoError("line " + std::to_string(line_no) + ": expected x,y");
        obs.x.push_back(to_double(f[0], line_no));
        obs.y.push_back(to_double(f[1], line_no));
    }
    if (obs.x.empty()) throw EmptyInput("pairs file has no data rows");
    return obs;
}

ObservationPair read_pairs_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_pairs_csv(in);
}

void write_pairs_csv(std::ostream& out, const ObservationPair& obs) {
    out << "x,y\n";
    for (std::size_t i = 0; i < obs.x.size(); ++i) out << g17(obs.x[i]) << ',' << g17(obs.y[i]) << '\n';
}

}  // namespace twoseq
