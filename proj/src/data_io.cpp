#include "tngp/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tngp/rng.hpp"
#include "tngp/structured_ops.hpp"

namespace tngp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Scaling Scaling::identity(const std::vector<double>& half_widths) {
    Scaling s;
    s.centers = VectorXd::Zero(static_cast<Index>(half_widths.size()));
    s.half_widths = Eigen::Map<const VectorXd>(
        half_widths.data(), static_cast<Index>(half_widths.size()));
    return s;
}

Index CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<Index>(i);
    }
    throw Error(ErrorCode::parse, "column '" + name + "' not found");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no,
                  std::size_t col_no) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    double value = 0.0;
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end || begin == end) {
        throw Error(ErrorCode::parse,
                    "row " + std::to_string(line_no) + ", column " +
                        std::to_string(col_no + 1) + ": cannot parse '" + cell +
                        "' as a number");
    }
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::parse,
                    "row " + std::to_string(line_no) + ", column " +
                        std::to_string(col_no + 1) + ": non-finite value '" +
                        cell + "'");
    }
    return value;
}

std::string format_double(double value) {
    char buffer[40];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    }
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (table.columns.empty()) {
            table.columns = std::move(cells);
            if (table.columns.empty()) {
                throw Error(ErrorCode::parse,
                            "'" + path.string() + "': empty header row");
            }
            continue;
        }
        if (cells.size() != table.columns.size()) {
            throw Error(ErrorCode::parse,
                        "row " + std::to_string(line_no) + ": has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(table.columns.size()));
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            row[c] = parse_cell(cells[c], line_no, c);
        }
        rows.push_back(std::move(row));
    }
    if (table.columns.empty()) {
        throw Error(ErrorCode::parse, "'" + path.string() + "': empty file");
    }
    table.values.resize(static_cast<Index>(rows.size()),
                        static_cast<Index>(table.columns.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            table.values(static_cast<Index>(r), static_cast<Index>(c)) =
                rows[r][c];
        }
    }
    return table;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values) {
    if (static_cast<Index>(columns.size()) != values.cols()) {
        throw Error(ErrorCode::config, "column names do not match value width");
    }
    std::ofstream file(path);
    if (!file) {
        throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c > 0) file << ',';
        file << columns[c];
    }
    file << '\n';
    for (Index r = 0; r < values.rows(); ++r) {
        for (Index c = 0; c < values.cols(); ++c) {
            if (c > 0) file << ',';
            file << format_double(values(r, c));
        }
        file << '\n';
    }
    if (!file) {
        throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
    }
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    if (schema.input_columns.empty()) {
        throw Error(ErrorCode::config, "schema selects no input columns");
    }
    const CsvTable table = read_csv(path);
    if (table.values.rows() < 1) {
        throw Error(ErrorCode::parse, "'" + path.string() + "': no data rows");
    }
    Dataset ds;
    ds.inputs.resize(table.values.rows(),
                     static_cast<Index>(schema.input_columns.size()));
    for (std::size_t c = 0; c < schema.input_columns.size(); ++c) {
        ds.inputs.col(static_cast<Index>(c)) =
            table.values.col(table.column_index(schema.input_columns[c]));
    }
    ds.targets = table.values.col(table.column_index(schema.target_column));
    ds.scaling.centers = VectorXd::Zero(ds.inputs.cols());
    ds.scaling.half_widths = VectorXd::Zero(ds.inputs.cols());
    return ds;
}

Scaling fit_scaling(const Eigen::MatrixXd& raw_inputs, double boundary_factor) {
    if (!(boundary_factor > 0.0)) {
        throw Error(ErrorCode::config, "boundary_factor must be > 0");
    }
    if (raw_inputs.rows() < 1) {
        throw Error(ErrorCode::config, "scaling needs at least one row");
    }
    Scaling s;
    s.centers = raw_inputs.colwise().mean();
    s.half_widths.resize(raw_inputs.cols());
    for (Index d = 0; d < raw_inputs.cols(); ++d) {
        const double max_abs =
            (raw_inputs.col(d).array() - s.centers[d]).abs().maxCoeff();
        if (max_abs == 0.0) {
            warn("input column " + std::to_string(d + 1) +
                 " is constant; using half-width 1");
            s.half_widths[d] = 1.0;
        } else {
            s.half_widths[d] = (1.0 + boundary_factor) * max_abs;
        }
    }
    return s;
}

Eigen::MatrixXd apply_scaling(const Eigen::MatrixXd& raw, const Scaling& s) {
    if (raw.cols() != s.centers.size()) {
        throw Error(ErrorCode::config, "scaling width mismatch");
    }
    return raw.rowwise() - s.centers.transpose();
}

Eigen::MatrixXd invert_scaling(const Eigen::MatrixXd& scaled, const Scaling& s) {
    if (scaled.cols() != s.centers.size()) {
        throw Error(ErrorCode::config, "scaling width mismatch");
    }
    return scaled.rowwise() + s.centers.transpose();
}

void SynthSpec::validate() const {
    basis.validate();
    hyper.validate();
    if (dims != basis.dims()) {
        throw Error(ErrorCode::config, "spec dims does not match basis dims");
    }
    if (n_train < 1 || n_test < 1) {
        throw Error(ErrorCode::config, "n_train and n_test must be >= 1");
    }
    if (site && (*site < 0 || *site >= dims)) {
        throw Error(ErrorCode::config, "site out of range");
    }
}

namespace {

MatrixXd uniform_inputs(Index n, const BasisConfig& cfg, Rng& rng) {
    MatrixXd inputs(n, cfg.dims());
    for (Index i = 0; i < n; ++i) {
        for (Index d = 0; d < cfg.dims(); ++d) {
            inputs(i, d) = (2.0 * rng.uniform() - 1.0) *
                           cfg.half_widths[static_cast<std::size_t>(d)];
        }
    }
    return inputs;
}

MatrixXd grid_inputs(Index n, const BasisConfig& cfg) {
    const Index dims = cfg.dims();
    const auto side = static_cast<Index>(std::llround(
        std::pow(static_cast<double>(n), 1.0 / static_cast<double>(dims))));
    Index total = 1;
    for (Index d = 0; d < dims; ++d) total *= side;
    if (total != n) {
        throw Error(ErrorCode::config,
                    "grid layout needs a perfect D-th power of points, got " +
                        std::to_string(n));
    }
    MatrixXd inputs(n, dims);
    for (Index i = 0; i < n; ++i) {
        Index rest = i;
        for (Index d = dims - 1; d >= 0; --d) {
            const Index cell = rest % side;
            rest /= side;
            const double l = cfg.half_widths[static_cast<std::size_t>(d)];
            // cell midpoints keep every point strictly inside the box
            inputs(i, d) =
                -l + (2.0 * l) * (static_cast<double>(cell) + 0.5) /
                         static_cast<double>(side);
        }
    }
    return inputs;
}

}  // namespace

SyntheticData generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    SyntheticData data;
    data.site = spec.site.value_or((spec.dims - 1) / 2);  // middle core

    MatrixXd train_inputs = spec.layout == SynthSpec::Layout::grid
                                ? grid_inputs(spec.n_train, spec.basis)
                                : uniform_inputs(spec.n_train, spec.basis, rng);
    MatrixXd test_inputs = uniform_inputs(spec.n_test, spec.basis, rng);

    TensorTrain projection =
        TensorTrain::random(spec.basis.m_per_dim, spec.ranks, rng.next_u64())
            .orthogonalized(data.site);

    const Index k = projection.subspace_size(data.site);
    VectorXd core_weights(k);
    for (Index i = 0; i < k; ++i) core_weights[i] = rng.normal();

    const LambdaFactors lf = lambda_factors(spec.basis, spec.hyper);
    const FeatureSet fs = FeatureSet::build(train_inputs, spec.basis);
    data.f_train = project_features(fs, lf, projection, data.site) * core_weights;
    data.f_test = project_test_rows(test_inputs, spec.basis, lf, projection,
                                    data.site) *
                  core_weights;

    const double signal_power =
        data.f_train.squaredNorm() / static_cast<double>(spec.n_train);
    if (!(signal_power > 0.0)) {
        throw Error(ErrorCode::domain,
                    "generated signal has zero power; cannot set the noise "
                    "level from the SNR");
    }
    data.sigma_y_sq = signal_power / std::pow(10.0, spec.snr_db / 10.0);
    const double sigma_y = std::sqrt(data.sigma_y_sq);

    VectorXd train_noise(spec.n_train);
    for (Index i = 0; i < spec.n_train; ++i) train_noise[i] = rng.normal();
    VectorXd test_noise(spec.n_test);
    for (Index i = 0; i < spec.n_test; ++i) test_noise[i] = rng.normal();

    data.train.inputs = std::move(train_inputs);
    data.train.targets = data.f_train + sigma_y * train_noise;
    data.train.scaling = Scaling::identity(spec.basis.half_widths);
    data.test.inputs = std::move(test_inputs);
    data.test.targets = data.f_test + sigma_y * test_noise;
    data.test.scaling = Scaling::identity(spec.basis.half_widths);
    return data;
}

}  // namespace tngp
