// CSV and JSON writers/readers for fields, tabulated maps and solver
// diagnostics. Values are printed with %.17g so a round trip through text
// reproduces every double bit-exactly.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "poismg/coordinate_map.hpp"
#include "poismg/field.hpp"

namespace poismg {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void write_grid_header(std::ostream& os, const UniformGrid& g) {
    os << "# nx,ny,x_min,x_max,y_min,y_max\n";
    os << "# " << g.nx << "," << g.ny << "," << format_double(g.x_min) << ","
       << format_double(g.x_max) << "," << format_double(g.y_min) << ","
       << format_double(g.y_max) << "\n";
}

inline UniformGrid parse_grid_header(std::istream& is, const std::string& path) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# nx,ny", 0) != 0)
        throw std::runtime_error(path + ": missing grid header line");
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error(path + ": missing grid value line");
    std::istringstream ls(line.substr(2));
    int nx, ny;
    double x0, x1, y0, y1;
    char c;
    if (!(ls >> nx >> c >> ny >> c >> x0 >> c >> x1 >> c >> y0 >> c >> y1))
        throw std::runtime_error(path + ": malformed grid values");
    return make_grid(nx, ny, Extents{x0, x1, y0, y1});
}

inline std::vector<double> parse_row(const std::string& line, std::size_t expected,
                                     const std::string& path) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t next = line.find(',', pos);
        const std::string tok = line.substr(pos, next == std::string::npos ? next : next - pos);
        out.push_back(std::strtod(tok.c_str(), nullptr));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (out.size() != expected)
        throw std::runtime_error(path + ": expected " + std::to_string(expected) +
                                 " columns, got " + std::to_string(out.size()));
    return out;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

}  // namespace detail

/// Field CSV: grid header, a column header, then one x,y,value row per node
/// in storage order (x varies fastest). Optional coordinate fields replace
/// the lattice coordinates, which is how fields are exported at physical
/// node positions.
inline void write_field_csv(const std::filesystem::path& path, const ScalarField& f,
                            const ScalarField* coord_x = nullptr,
                            const ScalarField* coord_y = nullptr) {
    std::ofstream os = detail::open_out(path);
    detail::write_grid_header(os, f.grid);
    os << "x,y,value\n";
    const UniformGrid& g = f.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = coord_x ? coord_x->at(i, j) : g.x(i);
            const double y = coord_y ? coord_y->at(i, j) : g.y(j);
            os << format_double(x) << "," << format_double(y) << ","
               << format_double(f.at(i, j)) << "\n";
        }
}

inline ScalarField read_field_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    const UniformGrid g = detail::parse_grid_header(is, path.string());
    std::string line;
    if (!std::getline(is, line) || line != "x,y,value")
        throw std::runtime_error(path.string() + ": missing x,y,value header");
    ScalarField f(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::getline(is, line))
            throw std::runtime_error(path.string() + ": truncated data section");
        f.values[k] = detail::parse_row(line, 3, path.string())[2];
    }
    return f;
}

/// Tabulated map CSV: grid header then x,y,xprime,yprime rows.
inline void write_map_csv(const std::filesystem::path& path, const TabulatedMap& map) {
    std::ofstream os = detail::open_out(path);
    const UniformGrid& g = map.xp.grid;
    detail::write_grid_header(os, g);
    os << "x,y,xprime,yprime\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            os << format_double(g.x(i)) << "," << format_double(g.y(j)) << ","
               << format_double(map.xp.at(i, j)) << "," << format_double(map.yp.at(i, j))
               << "\n";
}

inline TabulatedMap read_map_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    const UniformGrid g = detail::parse_grid_header(is, path.string());
    std::string line;
    if (!std::getline(is, line) || line != "x,y,xprime,yprime")
        throw std::runtime_error(path.string() + ": missing x,y,xprime,yprime header");
    TabulatedMap map{ScalarField(g), ScalarField(g)};
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::getline(is, line))
            throw std::runtime_error(path.string() + ": truncated data section");
        const auto row = detail::parse_row(line, 4, path.string());
        map.xp.values[k] = row[2];
        map.yp.values[k] = row[3];
    }
    return map;
}

/// Per-iteration residual history: iteration,residual_l2.
inline void write_residual_csv(const std::filesystem::path& path,
                               const std::vector<double>& history) {
    std::ofstream os = detail::open_out(path);
    os << "iteration,residual_l2\n";
    for (std::size_t k = 0; k < history.size(); ++k)
        os << (k + 1) << "," << format_double(history[k]) << "\n";
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream os = detail::open_out(path);
    os << j.dump(2) << "\n";
}

}  // namespace poismg
