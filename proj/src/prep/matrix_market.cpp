#include "gridqls/prep/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gridqls/error.hpp"

namespace gridqls::prep {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(std::size_t line, const std::string &msg) {
    throw ParseError("MatrixMarket line " + std::to_string(line) + ": " + msg);
}

enum class Symmetry { General, Symmetric, Hermitian, Skew };

} // namespace

CMatrix read_matrix_market(std::istream &in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) {
        fail(1, "empty input");
    }
    ++lineno;
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        fail(lineno, "expected '%%MatrixMarket matrix' banner");
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    const bool coordinate = format == "coordinate";
    if (!coordinate && format != "array") {
        fail(lineno, "unknown format '" + format + "'");
    }
    const bool complex = field == "complex";
    if (!complex && field != "real" && field != "integer" && field != "double") {
        fail(lineno, "unsupported field '" + field + "'");
    }
    Symmetry sym;
    if (symmetry == "general") {
        sym = Symmetry::General;
    } else if (symmetry == "symmetric") {
        sym = Symmetry::Symmetric;
    } else if (symmetry == "hermitian") {
        sym = Symmetry::Hermitian;
    } else if (symmetry == "skew-symmetric") {
        sym = Symmetry::Skew;
    } else {
        fail(lineno, "unknown symmetry '" + symmetry + "'");
    }

    auto next_data_line = [&](std::string &out) {
        while (std::getline(in, out)) {
            ++lineno;
            const auto pos = out.find_first_not_of(" \t\r");
            if (pos != std::string::npos && out[pos] != '%') {
                return true;
            }
        }
        return false;
    };

    if (!next_data_line(line)) {
        fail(lineno, "missing size line");
    }
    long rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> rows >> cols) || (coordinate && !(ss >> nnz)) || rows <= 0 || cols <= 0 || nnz < 0) {
            fail(lineno, "malformed size line");
        }
    }
    if (sym != Symmetry::General && rows != cols) {
        fail(lineno, "symmetric storage needs a square matrix");
    }
    CMatrix m = CMatrix::Zero(rows, cols);

    auto put = [&](long i, long j, cplx v) {
        m(i, j) = v;
        if (i != j) {
            switch (sym) {
            case Symmetry::General:
                break;
            case Symmetry::Symmetric:
                m(j, i) = v;
                break;
            case Symmetry::Hermitian:
                m(j, i) = std::conj(v);
                break;
            case Symmetry::Skew:
                m(j, i) = -v;
                break;
            }
        }
    };
    auto read_value = [&](std::istringstream &ss) {
        double re = 0.0, im = 0.0;
        if (!(ss >> re) || (complex && !(ss >> im))) {
            fail(lineno, "malformed value");
        }
        return cplx{re, im};
    };

    if (coordinate) {
        for (long k = 0; k < nnz; ++k) {
            if (!next_data_line(line)) {
                fail(lineno, "expected " + std::to_string(nnz) + " entries, got " + std::to_string(k));
            }
            std::istringstream ss(line);
            long i = 0, j = 0;
            if (!(ss >> i >> j)) {
                fail(lineno, "malformed entry");
            }
            if (i < 1 || i > rows || j < 1 || j > cols) {
                fail(lineno, "index out of range");
            }
            if (sym != Symmetry::General && j > i) {
                fail(lineno, "entry above the diagonal in symmetric storage");
            }
            put(i - 1, j - 1, read_value(ss));
        }
    } else {
        for (long j = 0; j < cols; ++j) {
            const long first = sym == Symmetry::General ? 0 : (sym == Symmetry::Skew ? j + 1 : j);
            for (long i = first; i < rows; ++i) {
                if (!next_data_line(line)) {
                    fail(lineno, "array data ended early");
                }
                std::istringstream ss(line);
                put(i, j, read_value(ss));
            }
        }
    }
    return m;
}

CMatrix read_matrix_market(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    try {
        return read_matrix_market(in);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

CVector read_vector_market(const std::filesystem::path &path) {
    CMatrix m = read_matrix_market(path);
    if (m.cols() != 1 && m.rows() != 1) {
        throw ParseError(path.string() + ": expected a vector, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
    }
    return m.cols() == 1 ? CVector(m.col(0)) : CVector(m.row(0).transpose());
}

void write_matrix_market(std::ostream &out, const CMatrix &matrix, bool dense) {
    const bool complex = matrix.imag().cwiseAbs().maxCoeff() != 0.0;
    out << "%%MatrixMarket matrix " << (dense ? "array" : "coordinate") << ' ' << (complex ? "complex" : "real")
        << " general\n";
    char buf[64];
    auto value = [&](cplx v) {
        std::snprintf(buf, sizeof buf, "%.17g", v.real());
        out << buf;
        if (complex) {
            std::snprintf(buf, sizeof buf, " %.17g", v.imag());
            out << buf;
        }
    };
    if (dense) {
        out << matrix.rows() << ' ' << matrix.cols() << '\n';
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
                value(matrix(i, j));
                out << '\n';
            }
        }
        return;
    }
    std::size_t nnz = 0;
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
            nnz += matrix(i, j) != cplx{0.0, 0.0};
        }
    }
    out << matrix.rows() << ' ' << matrix.cols() << ' ' << nnz << '\n';
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
            if (matrix(i, j) != cplx{0.0, 0.0}) {
                out << i + 1 << ' ' << j + 1 << ' ';
                value(matrix(i, j));
                out << '\n';
            }
        }
    }
}

void write_matrix_market(const std::filesystem::path &path, const CMatrix &matrix, bool dense) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_matrix_market(out, matrix, dense);
}

} // namespace gridqls::prep
