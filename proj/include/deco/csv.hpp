#pragma once

#include <complex>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "deco/errors.hpp"

namespace deco::csv {

// Floating point is always written with 17 significant digits so that
// round-tripping through text is lossless and outputs are byte-stable.
inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string num(std::complex<double> v) {
    return num(v.real()) + "," + num(v.imag());
}

class Writer {
  public:
    Writer(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw ConfigError("cannot open output file: " + path);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    // Row cells are preformatted strings; use num() for numbers.
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

} // namespace deco::csv
