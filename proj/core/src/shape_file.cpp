#include "steklov/shape_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace steklov {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string strip_comment(const std::string& line) {
    const std::size_t pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

} // namespace

std::string serialize_shape(const ConformalShape& shape) {
    std::ostringstream out;
    out << "steklov-shape v1\n";
    out << "K " << shape.truncation() << "\n";
    for (int k = 0; k <= shape.truncation(); ++k) {
        const cplx a = shape.coeff(k);
        if (a == cplx{0.0, 0.0}) continue;
        out << k << ' ' << format_double(a.real()) << ' ' << format_double(a.imag()) << '\n';
    }
    return out.str();
}

ConformalShape parse_shape(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw input_error("shape file: empty input");
    {
        std::istringstream header(strip_comment(line));
        std::string magic, version;
        header >> magic >> version;
        if (magic != "steklov-shape" || version != "v1")
            throw input_error("shape file: expected header 'steklov-shape v1'");
    }

    int truncation = -1;
    std::vector<cplx> coeffs;
    int last_k = -1;
    while (std::getline(in, line)) {
        std::istringstream row(strip_comment(line));
        std::string first;
        if (!(row >> first)) continue;
        if (first == "K") {
            if (truncation >= 0) throw input_error("shape file: duplicate K line");
            if (!(row >> truncation) || truncation < 0)
                throw input_error("shape file: bad truncation");
            coeffs.assign(static_cast<std::size_t>(truncation) + 1, cplx{0.0, 0.0});
            continue;
        }
        if (truncation < 0) throw input_error("shape file: coefficient before K line");
        int k = 0;
        double re = 0.0, im = 0.0;
        try {
            k = std::stoi(first);
        } catch (const std::exception&) {
            throw input_error("shape file: bad coefficient index '" + first + "'");
        }
        if (!(row >> re >> im)) throw input_error("shape file: bad coefficient row");
        std::string extra;
        if (row >> extra) throw input_error("shape file: trailing tokens on coefficient row");
        if (k <= last_k) throw input_error("shape file: indices must be strictly increasing");
        if (k > truncation) throw input_error("shape file: index exceeds truncation");
        if (!std::isfinite(re) || !std::isfinite(im))
            throw input_error("shape file: non-finite coefficient");
        coeffs[static_cast<std::size_t>(k)] = {re, im};
        last_k = k;
    }
    if (truncation < 0) throw input_error("shape file: missing K line");
    return ConformalShape(std::move(coeffs));
}

ConformalShape parse_shape(const std::string& text) {
    std::istringstream in(text);
    return parse_shape(in);
}

void write_shape_file(const std::string& path, const ConformalShape& shape) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open shape file for writing: " + path);
    out << serialize_shape(shape);
}

ConformalShape read_shape_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open shape file: " + path);
    return parse_shape(in);
}

} // namespace steklov
