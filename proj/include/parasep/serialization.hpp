#pragma once
//
// On-disk formats.
//
// Payload file (".bin"), little-endian:
//   bytes  0..7   magic "PSEPMAT1"
//   bytes  8..11  uint32 field tag (0 = real, 1 = complex)
//   bytes 12..15  uint32 reserved (0)
//   bytes 16..23  uint64 rows
//   bytes 24..31  uint64 cols
//   then rows*cols entries in row-major order, float64 each (complex entries
//   are two float64: real part then imaginary part).
//
// Snapshot-model manifest (JSON): selected parameters, selected z-rows, the
// interpolation matrix Z, the layout (kernel/weight/psi identifiers, magic
// points, triangular matrix B), and the payload file names.
//

#include "errors.hpp"
#include "functions.hpp"
#include "reduced_basis.hpp"
#include "scalar.hpp"
#include "snapshot_model.hpp"
#include "term_layout.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace parasep {

inline constexpr std::array<char, 8> payload_magic{'P', 'S', 'E', 'P', 'M', 'A', 'T', '1'};

template <FieldScalar Scalar>
void write_payload(const std::filesystem::path& path, const Matrix<Scalar>& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open '" + path.string() + "' for writing");
    const std::uint32_t field = is_complex<Scalar>::value ? 1 : 0;
    const std::uint32_t reserved = 0;
    const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
    const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
    os.write(payload_magic.data(), payload_magic.size());
    os.write(reinterpret_cast<const char*>(&field), sizeof field);
    os.write(reinterpret_cast<const char*>(&reserved), sizeof reserved);
    os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = m;
    os.write(reinterpret_cast<const char*>(row_major.data()),
             static_cast<std::streamsize>(sizeof(Scalar) * static_cast<std::size_t>(row_major.size())));
    if (!os)
        throw Error("failed writing '" + path.string() + "'");
}

template <FieldScalar Scalar>
Matrix<Scalar> read_payload(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error("cannot open payload '" + path.string() + "'");
    std::array<char, 8> magic{};
    std::uint32_t field = 0, reserved = 0;
    std::uint64_t rows = 0, cols = 0;
    is.read(magic.data(), magic.size());
    is.read(reinterpret_cast<char*>(&field), sizeof field);
    is.read(reinterpret_cast<char*>(&reserved), sizeof reserved);
    is.read(reinterpret_cast<char*>(&rows), sizeof rows);
    is.read(reinterpret_cast<char*>(&cols), sizeof cols);
    if (!is || magic != payload_magic)
        throw Error("'" + path.string() + "' is not a payload file");
    if (field != (is_complex<Scalar>::value ? 1u : 0u))
        throw ContractViolation("'" + path.string() + "' has field tag " + std::to_string(field));
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major(static_cast<Eigen::Index>(rows),
                                                                                   static_cast<Eigen::Index>(cols));
    is.read(reinterpret_cast<char*>(row_major.data()),
            static_cast<std::streamsize>(sizeof(Scalar) * static_cast<std::size_t>(row_major.size())));
    if (!is)
        throw Error("'" + path.string() + "' is truncated");
    return row_major;
}

namespace detail {

template <FieldScalar Scalar>
nlohmann::json matrix_to_json(const Matrix<Scalar>& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> re, im;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(std::real(m(r, c)));
            if constexpr (is_complex<Scalar>::value)
                im.push_back(m(r, c).imag());
        }
    j["re"] = re;
    if constexpr (is_complex<Scalar>::value)
        j["im"] = im;
    return j;
}

template <FieldScalar Scalar>
Matrix<Scalar> matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto re = j.at("re").get<std::vector<double>>();
    std::vector<double> im;
    if constexpr (is_complex<Scalar>::value)
        im = j.at("im").get<std::vector<double>>();
    if (re.size() != static_cast<std::size_t>(rows * cols))
        throw ContractViolation("manifest: matrix entry count mismatch");
    Matrix<Scalar> m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto k = static_cast<std::size_t>(r * cols + c);
            if constexpr (is_complex<Scalar>::value)
                m(r, c) = Scalar(re[k], im[k]);
            else
                m(r, c) = re[k];
        }
    return m;
}

inline nlohmann::json row_to_json(const ZRowMeta& row) {
    if (row.kind == ZRowMeta::Kind::psi)
        return {{"kind", "psi"}, {"psi", row.psi}};
    return {{"kind", "lambda"}, {"block", row.block}, {"weight", row.weight}, {"m", row.m}};
}

}  // namespace detail

template <FieldScalar Scalar>
nlohmann::json layout_to_json(const TermLayout<Scalar>& layout) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : layout.blocks) {
        nlohmann::json weights = nlohmann::json::array();
        for (const auto& w : b.weights)
            weights.push_back(w.id);
        blocks.push_back({{"kernel", b.kernel.id},
                          {"weights", weights},
                          {"magic_points", b.magic_points},
                          {"B", detail::matrix_to_json<Scalar>(b.B)}});
    }
    nlohmann::json psis = nlohmann::json::array();
    for (const auto& p : layout.psis)
        psis.push_back(p.id);
    return {{"blocks", blocks}, {"psis", psis}};
}

template <FieldScalar Scalar>
TermLayout<Scalar> layout_from_json(const nlohmann::json& j, const FunctionRegistry<Scalar>& reg) {
    TermLayout<Scalar> layout;
    for (const auto& b : j.at("blocks")) {
        KernelBlock<Scalar> blk;
        blk.kernel = reg.kernel(b.at("kernel").get<std::string>());
        for (const auto& w : b.at("weights"))
            blk.weights.push_back(reg.function(w.get<std::string>()));
        blk.magic_points = b.at("magic_points").get<std::vector<double>>();
        blk.B = detail::matrix_from_json<Scalar>(b.at("B"));
        layout.blocks.push_back(std::move(blk));
    }
    for (const auto& p : j.at("psis"))
        layout.psis.push_back(reg.function(p.get<std::string>()));
    return layout;
}

/// Writes manifest.json plus one payload file per snapshot into `dir`.
template <FieldScalar Scalar>
void save_model(const std::filesystem::path& dir, const SnapshotModel<Scalar>& model) {
    std::filesystem::create_directories(dir);
    const auto& coeff = model.coefficients;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : coeff.selected_rows())
        rows.push_back(detail::row_to_json(r));
    nlohmann::json files = nlohmann::json::array();
    for (std::size_t m = 0; m < model.snapshots.size(); ++m) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%03zu.bin", m);
        write_payload<Scalar>(dir / name, model.snapshots[m]);
        files.push_back(name);
    }
    nlohmann::json j = {{"format", "parasep-snapshot-model"},
                        {"version", 1},
                        {"field", std::string(field_name(field_of<Scalar>()))},
                        {"payload", payload_name(model.payload)},
                        {"provider_calls", model.provider_calls},
                        {"mu_sel", coeff.mu_sel()},
                        {"p_sel", coeff.p_sel()},
                        {"rows", rows},
                        {"Z", detail::matrix_to_json<Scalar>(coeff.Z())},
                        {"layout", layout_to_json(coeff.layout())},
                        {"snapshots", files}};
    std::ofstream os(dir / "manifest.json");
    os << j.dump(2) << '\n';
    if (!os)
        throw Error("failed writing manifest in '" + dir.string() + "'");
}

inline nlohmann::json read_manifest(const std::filesystem::path& manifest) {
    std::ifstream is(manifest);
    if (!is)
        throw Error("cannot open manifest '" + manifest.string() + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ContractViolation("manifest '" + manifest.string() + "': " + e.what());
    }
    if (j.value("format", "") != "parasep-snapshot-model")
        throw ContractViolation("'" + manifest.string() + "' is not a snapshot-model manifest");
    return j;
}

template <FieldScalar Scalar>
SnapshotModel<Scalar> load_model(const std::filesystem::path& manifest, const FunctionRegistry<Scalar>& reg) {
    const nlohmann::json j = read_manifest(manifest);
    if (j.at("field").get<std::string>() != field_name(field_of<Scalar>()))
        throw ContractViolation("manifest field tag does not match the requested scalar type");
    SnapshotModel<Scalar> model;
    model.payload = payload_from_name(j.at("payload").get<std::string>());
    model.provider_calls = j.at("provider_calls").get<std::size_t>();
    const auto dir = manifest.parent_path();
    for (const auto& f : j.at("snapshots"))
        model.snapshots.push_back(read_payload<Scalar>(dir / f.get<std::string>()));
    model.coefficients = SeparatedCoefficients<Scalar>(layout_from_json(j.at("layout"), reg),
                                                       j.at("p_sel").get<std::vector<std::size_t>>(),
                                                       j.at("mu_sel").get<std::vector<double>>(),
                                                       detail::matrix_from_json<Scalar>(j.at("Z")));
    if (model.snapshots.size() != model.coefficients.size())
        throw ContractViolation("manifest: snapshot count does not match the selection");
    return model;
}

/// basis.bin (U) plus basis.json (selected mu, n_hat, orthonormality residual).
template <FieldScalar Scalar>
void save_basis(const std::filesystem::path& dir, const ReducedBasis<Scalar>& basis) {
    std::filesystem::create_directories(dir);
    write_payload<Scalar>(dir / "basis.bin", basis.U);
    nlohmann::json j = {{"format", "parasep-reduced-basis"},
                        {"field", std::string(field_name(field_of<Scalar>()))},
                        {"n_hat", basis.size()},
                        {"mu_rb", basis.mu_rb},
                        {"orthonormality_residual", basis.orthonormality_residual()},
                        {"max_train_error", basis.max_train_error},
                        {"payload", "basis.bin"}};
    std::ofstream os(dir / "basis.json");
    os << j.dump(2) << '\n';
}

}  // namespace parasep
