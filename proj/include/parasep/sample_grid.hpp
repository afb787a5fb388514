#pragma once
//
// Tabulated values of a bivariate function on two finite trial sets.
//
// Rows play the "parameter" role and columns the "variable" role of the
// greedy interpolation. Labels are plain doubles: a parameter value, a
// spatial coordinate, a distance, or an integer row index stored exactly.
//

#include "errors.hpp"
#include "scalar.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace parasep {

template <FieldScalar Scalar>
class SampleGrid {
public:
    SampleGrid(std::vector<double> row_labels, std::vector<double> col_labels, Matrix<Scalar> values)
        : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)), values_(std::move(values)) {
        validate();
    }

    /// Tabulates f(row_label, col_label) on the product of the two label sets.
    template <typename Fn>
    static SampleGrid tabulate(std::vector<double> rows, std::vector<double> cols, Fn&& f) {
        Matrix<Scalar> v(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (Eigen::Index i = 0; i < v.rows(); ++i)
            for (Eigen::Index j = 0; j < v.cols(); ++j)
                v(i, j) = static_cast<Scalar>(f(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]));
        return SampleGrid(std::move(rows), std::move(cols), std::move(v));
    }

    const std::vector<double>& row_labels() const noexcept { return row_labels_; }
    const std::vector<double>& col_labels() const noexcept { return col_labels_; }
    const Matrix<Scalar>& values() const noexcept { return values_; }
    std::size_t rows() const noexcept { return row_labels_.size(); }
    std::size_t cols() const noexcept { return col_labels_.size(); }
    static constexpr Field field() { return field_of<Scalar>(); }

    SampleGrid transposed() const { return SampleGrid(col_labels_, row_labels_, values_.transpose()); }

private:
    void validate() const {
        if (row_labels_.empty() || col_labels_.empty())
            throw ContractViolation("SampleGrid: label lists must be nonempty");
        if (values_.rows() != static_cast<Eigen::Index>(row_labels_.size()) ||
            values_.cols() != static_cast<Eigen::Index>(col_labels_.size()))
            throw ContractViolation("SampleGrid: value table does not match label counts");
        check_unique(row_labels_, "row");
        check_unique(col_labels_, "column");
        for (Eigen::Index j = 0; j < values_.cols(); ++j)
            for (Eigen::Index i = 0; i < values_.rows(); ++i)
                if (!is_finite(values_(i, j)))
                    throw ContractViolation("SampleGrid: non-finite entry at (" + std::to_string(i) + ", " +
                                            std::to_string(j) + ")");
    }

    static void check_unique(const std::vector<double>& labels, const char* what) {
        std::unordered_set<double> seen;
        for (double l : labels)
            if (!seen.insert(l).second)
                throw ContractViolation(std::string("SampleGrid: duplicate ") + what + " label " + std::to_string(l));
    }

    std::vector<double> row_labels_;
    std::vector<double> col_labels_;
    Matrix<Scalar> values_;
};

// ---------------------------------------------------------------------------
// CSV layout: first row holds the column labels (leading cell is empty), every
// following row starts with its row label. Complex entries are written as
// "re+imj" / "re-imj". All numbers use 17 significant digits.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <FieldScalar Scalar>
std::string format_scalar(const Scalar& v) {
    if constexpr (is_complex<Scalar>::value) {
        std::string out = format_real(v.real());
        const std::string im = format_real(v.imag());
        if (im.front() != '-' && im.front() != '+')
            out += '+';
        out += im;
        out += 'j';
        return out;
    } else {
        return format_real(v);
    }
}

inline double parse_real(std::string_view s) {
    // from_chars does not accept a leading '+'.
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ContractViolation("CSV: cannot parse number '" + std::string(s) + "'");
    return v;
}

template <FieldScalar Scalar>
Scalar parse_scalar(std::string_view s) {
    if constexpr (is_complex<Scalar>::value) {
        if (s.empty() || s.back() != 'j')
            return Scalar(parse_real(s), 0.0);
        s.remove_suffix(1);
        // The imaginary part starts at the last sign that is not part of an exponent.
        std::size_t split = std::string_view::npos;
        for (std::size_t i = s.size(); i-- > 1;) {
            if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
                split = i;
                break;
            }
        }
        if (split == std::string_view::npos)
            return Scalar(0.0, parse_real(s));
        return Scalar(parse_real(s.substr(0, split)), parse_real(s.substr(split)));
    } else {
        return parse_real(s);
    }
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace detail

template <FieldScalar Scalar>
void write_csv(std::ostream& os, const SampleGrid<Scalar>& grid) {
    for (double c : grid.col_labels())
        os << ',' << detail::format_real(c);
    os << '\n';
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        os << detail::format_real(grid.row_labels()[i]);
        for (std::size_t j = 0; j < grid.cols(); ++j)
            os << ',' << detail::format_scalar<Scalar>(grid.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        os << '\n';
    }
}

template <FieldScalar Scalar>
SampleGrid<Scalar> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw ContractViolation("CSV: empty input");
    auto header = detail::split_commas(line);
    if (header.size() < 2)
        throw ContractViolation("CSV: header needs at least one column label");
    std::vector<double> cols;
    for (std::size_t j = 1; j < header.size(); ++j)
        cols.push_back(detail::parse_real(header[j]));

    std::vector<double> rows;
    std::vector<Scalar> flat;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        auto cells = detail::split_commas(line);
        if (cells.size() != header.size())
            throw ContractViolation("CSV: row " + std::to_string(rows.size() + 1) + " has wrong cell count");
        rows.push_back(detail::parse_real(cells[0]));
        for (std::size_t j = 1; j < cells.size(); ++j)
            flat.push_back(detail::parse_scalar<Scalar>(cells[j]));
    }
    Matrix<Scalar> values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            values(i, j) = flat[static_cast<std::size_t>(i * values.cols() + j)];
    return SampleGrid<Scalar>(std::move(rows), std::move(cols), std::move(values));
}

}  // namespace parasep
