#include "bdlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace bdlab {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        std::size_t b = 0;
        while (b < field.size() && field[b] == ' ') ++b;
        out.push_back(field.substr(b));
    }
    return out;
}

double parse_double(const std::string& tok) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw ValidationError("csv: trailing characters in number '" + tok + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw ValidationError("csv: cannot parse number '" + tok + "'");
    } catch (const std::out_of_range&) {
        throw ValidationError("csv: number out of range '" + tok + "'");
    }
}

struct Header {
    bool two_d = false;
    bool weighted = false;
};

Header parse_header(const std::string& line) {
    const auto cols = split_row(line);
    Header h;
    if (cols.size() == 1 && cols[0] == "x") {
        return h;
    }
    if (cols.size() == 2 && cols[0] == "x" && cols[1] == "w") {
        h.weighted = true;
        return h;
    }
    if (cols.size() == 2 && cols[0] == "x" && cols[1] == "y") {
        h.two_d = true;
        return h;
    }
    if (cols.size() == 3 && cols[0] == "x" && cols[1] == "y" && cols[2] == "w") {
        h.two_d = true;
        h.weighted = true;
        return h;
    }
    throw ValidationError("csv: header must be one of x | x,w | x,y | x,y,w");
}

std::ifstream open_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open file: " + path);
    }
    return in;
}

} // namespace

bool csv_is_2d(const std::string& path) {
    auto in = open_file(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("csv: empty file " + path);
    }
    return parse_header(line).two_d;
}

Sample1D read_sample1d(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("csv: missing header");
    }
    const Header h = parse_header(line);
    if (h.two_d) {
        throw ValidationError("csv: expected 1D data (header x[,w])");
    }
    std::vector<double> vals;
    std::vector<double> raw_w;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cols = split_row(line);
        const std::size_t want = h.weighted ? 2u : 1u;
        if (cols.size() != want) {
            throw ValidationError("csv: row has wrong number of fields");
        }
        vals.push_back(parse_double(cols[0]));
        if (h.weighted) raw_w.push_back(parse_double(cols[1]));
    }
    if (vals.empty()) {
        throw ValidationError("csv: no data rows");
    }
    if (h.weighted) return make_weighted_sample(std::move(vals), std::move(raw_w));
    return Sample1D(std::move(vals));
}

Sample2D read_sample2d(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("csv: missing header");
    }
    const Header h = parse_header(line);
    if (!h.two_d) {
        throw ValidationError("csv: expected 2D data (header x,y[,w])");
    }
    std::vector<Point> pts;
    std::vector<double> raw_w;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cols = split_row(line);
        const std::size_t want = h.weighted ? 3u : 2u;
        if (cols.size() != want) {
            throw ValidationError("csv: row has wrong number of fields");
        }
        pts.push_back(Point{parse_double(cols[0]), parse_double(cols[1])});
        if (h.weighted) raw_w.push_back(parse_double(cols[2]));
    }
    if (pts.empty()) {
        throw ValidationError("csv: no data rows");
    }
    if (h.weighted) return make_weighted_sample(std::move(pts), std::move(raw_w));
    return Sample2D(std::move(pts));
}

Sample1D read_sample1d(const std::string& path) {
    auto in = open_file(path);
    return read_sample1d(in);
}

Sample2D read_sample2d(const std::string& path) {
    auto in = open_file(path);
    return read_sample2d(in);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const Sample1D& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    const bool w = !s.uniform_weights();
    out << (w ? "x,w\n" : "x\n");
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_double(s.value(i));
        if (w) out << ',' << format_double(s.weight(i));
        out << '\n';
    }
}

void write_csv(const Sample2D& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    const bool w = !s.uniform_weights();
    out << (w ? "x,y,w\n" : "x,y\n");
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_double(s.point(i).x) << ',' << format_double(s.point(i).y);
        if (w) out << ',' << format_double(s.weight(i));
        out << '\n';
    }
}

} // namespace bdlab
