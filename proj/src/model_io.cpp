#include "tngp/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace tngp {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'T', 'N', 'G', 'P'};
constexpr int kVersion = 1;

void append_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void append_f64(std::string& out, double value) {
    const auto bits = std::bit_cast<std::uint64_t>(value);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
}

class Reader {
public:
    Reader(const std::string& data, const std::string& path)
        : data_(data), path_(path) {}

    std::uint32_t read_u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(
                     static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    double read_f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(data_[pos_ + i]))
                    << (8 * i);
        }
        pos_ += 8;
        return std::bit_cast<double>(bits);
    }

    std::string read_bytes(std::size_t n) {
        need(n);
        std::string out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    VectorXd read_vector(Index n) {
        VectorXd v(n);
        for (Index i = 0; i < n; ++i) v[i] = read_f64();
        return v;
    }

    MatrixXd read_matrix(Index rows, Index cols) {
        MatrixXd m(rows, cols);
        for (Index r = 0; r < rows; ++r) {
            for (Index c = 0; c < cols; ++c) m(r, c) = read_f64();
        }
        return m;
    }

    bool exhausted() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > data_.size()) {
            throw Error(ErrorCode::parse,
                        "'" + path_ + "': truncated model file");
        }
    }

    const std::string& data_;
    std::string path_;
    std::size_t pos_{0};
};

void append_vector(std::string& out, const VectorXd& v) {
    for (Index i = 0; i < v.size(); ++i) append_f64(out, v[i]);
}

void append_matrix(std::string& out, const MatrixXd& m) {
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) append_f64(out, m(r, c));
    }
}

json basis_to_json(const BasisConfig& cfg) {
    return json{{"m_per_dim", cfg.m_per_dim}, {"half_widths", cfg.half_widths}};
}

BasisConfig basis_from_json(const json& j) {
    BasisConfig cfg;
    cfg.m_per_dim = j.at("m_per_dim").get<std::vector<Index>>();
    cfg.half_widths = j.at("half_widths").get<std::vector<double>>();
    cfg.validate();
    return cfg;
}

json hyper_to_json(const HyperParams& hp) {
    return json{{"sigma_f_sq", hp.sigma_f_sq},
                {"length_scale", hp.length_scale},
                {"sigma_y_sq", hp.sigma_y_sq}};
}

HyperParams hyper_from_json(const json& j) {
    HyperParams hp;
    hp.sigma_f_sq = j.at("sigma_f_sq").get<double>();
    hp.length_scale = j.at("length_scale").get<double>();
    hp.sigma_y_sq = j.at("sigma_y_sq").get<double>();
    hp.validate();
    return hp;
}

}  // namespace

void save_model(const ModelFile& model, const std::filesystem::path& path) {
    json header;
    header["format"] = "TNGP";
    header["version"] = kVersion;
    header["method"] = model.method;
    header["input_columns"] = model.input_columns;
    header["scaling"] = {
        {"centers", std::vector<double>(model.scaling.centers.begin(),
                                        model.scaling.centers.end())},
        {"half_widths", std::vector<double>(model.scaling.half_widths.begin(),
                                            model.scaling.half_widths.end())}};

    std::string payload;
    if (model.method == "projected") {
        if (!model.projected) {
            throw Error(ErrorCode::config, "projected payload missing");
        }
        const auto& pp = *model.projected;
        header["basis"] = basis_to_json(pp.basis);
        header["hyper"] = hyper_to_json(pp.hyper);
        header["site"] = pp.site;
        header["ranks"] = pp.projection_tt.ranks();
        json cores = json::array();
        for (Index d = 0; d < pp.projection_tt.dims(); ++d) {
            const Core3& core = pp.projection_tt.core(d);
            cores.push_back({core.left(), core.mode(), core.right()});
            append_vector(payload, core.vec());
        }
        header["core_shapes"] = cores;
        append_vector(payload, pp.mean_core);
        append_matrix(payload, pp.cov_core);
    } else if (model.method == "hilbert-gp") {
        if (!model.hilbert) {
            throw Error(ErrorCode::config, "hilbert payload missing");
        }
        const auto& hb = *model.hilbert;
        header["basis"] = basis_to_json(hb.basis);
        header["hyper"] = hyper_to_json(hb.hyper);
        header["bases"] = hb.bases;
        append_vector(payload, hb.mean);
        append_matrix(payload, hb.cov);
    } else if (model.method == "full-gp") {
        if (!model.full_gp) {
            throw Error(ErrorCode::config, "full-gp payload missing");
        }
        const auto& gp = *model.full_gp;
        header["hyper"] = hyper_to_json(gp.hyper);
        header["n_train"] = gp.inputs.rows();
        header["dims"] = gp.inputs.cols();
        header["n_guard"] = gp.n_guard;
        append_matrix(payload, gp.inputs);
        append_vector(payload, gp.targets);
    } else {
        throw Error(ErrorCode::config, "unknown method '" + model.method + "'");
    }

    const std::string header_text = header.dump();
    std::string blob;
    blob.reserve(8 + header_text.size() + payload.size());
    blob.append(kMagic, 4);
    append_u32(blob, static_cast<std::uint32_t>(header_text.size()));
    blob += header_text;
    blob += payload;

    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    }
    file.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!file) {
        throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
    }
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    }
    std::string blob((std::istreambuf_iterator<char>(file)),
                     std::istreambuf_iterator<char>());
    Reader reader(blob, path.string());
    if (reader.read_bytes(4) != std::string(kMagic, 4)) {
        throw Error(ErrorCode::parse,
                    "'" + path.string() + "': not a TNGP model file");
    }
    const std::uint32_t header_len = reader.read_u32();
    json header;
    try {
        header = json::parse(reader.read_bytes(header_len));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, "'" + path.string() +
                                          "': bad model header: " + e.what());
    }
    try {
        if (header.at("version").get<int>() != kVersion) {
            throw Error(ErrorCode::parse,
                        "'" + path.string() + "': unsupported model version");
        }
        ModelFile model;
        model.method = header.at("method").get<std::string>();
        const auto centers =
            header.at("scaling").at("centers").get<std::vector<double>>();
        const auto widths =
            header.at("scaling").at("half_widths").get<std::vector<double>>();
        model.scaling.centers = Eigen::Map<const VectorXd>(
            centers.data(), static_cast<Index>(centers.size()));
        model.scaling.half_widths = Eigen::Map<const VectorXd>(
            widths.data(), static_cast<Index>(widths.size()));
        model.input_columns =
            header.at("input_columns").get<std::vector<std::string>>();

        if (model.method == "projected") {
            ProjectedPosterior pp;
            pp.basis = basis_from_json(header.at("basis"));
            pp.hyper = hyper_from_json(header.at("hyper"));
            pp.site = header.at("site").get<Index>();
            pp.lambda = lambda_factors(pp.basis, pp.hyper);
            std::vector<Core3> cores;
            for (const auto& shape : header.at("core_shapes")) {
                const auto left = shape.at(0).get<Index>();
                const auto mode = shape.at(1).get<Index>();
                const auto right = shape.at(2).get<Index>();
                cores.push_back(Core3::from_vec(
                    reader.read_vector(left * mode * right), left, mode, right));
            }
            pp.projection_tt = TensorTrain(std::move(cores), pp.site);
            const Index k = pp.projection_tt.subspace_size(pp.site);
            pp.mean_core = reader.read_vector(k);
            pp.cov_core = reader.read_matrix(k, k);
            model.projected = std::move(pp);
        } else if (model.method == "hilbert-gp") {
            HilbertPosterior hb;
            hb.basis = basis_from_json(header.at("basis"));
            hb.hyper = hyper_from_json(header.at("hyper"));
            hb.bases = header.at("bases").get<std::vector<MultiIndex>>();
            hb.lambda = lambda_factors(hb.basis, hb.hyper);
            const auto budget = static_cast<Index>(hb.bases.size());
            hb.mean = reader.read_vector(budget);
            hb.cov = reader.read_matrix(budget, budget);
            model.hilbert = std::move(hb);
        } else if (model.method == "full-gp") {
            GpModel gp;
            gp.hyper = hyper_from_json(header.at("hyper"));
            const auto n = header.at("n_train").get<Index>();
            const auto dims = header.at("dims").get<Index>();
            gp.n_guard = header.at("n_guard").get<Index>();
            gp.inputs = reader.read_matrix(n, dims);
            gp.targets = reader.read_vector(n);
            model.full_gp = std::move(gp);
        } else {
            throw Error(ErrorCode::parse, "'" + path.string() +
                                              "': unknown method '" +
                                              model.method + "'");
        }
        if (!reader.exhausted()) {
            throw Error(ErrorCode::parse,
                        "'" + path.string() + "': trailing bytes after payload");
        }
        return model;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse,
                    "'" + path.string() + "': bad model header: " + e.what());
    }
}

Prediction model_predict(const ModelFile& model,
                         const Eigen::MatrixXd& raw_inputs) {
    const MatrixXd scaled = apply_scaling(raw_inputs, model.scaling);
    if (model.method == "projected") {
        return predict(*model.projected, scaled);
    }
    if (model.method == "hilbert-gp") {
        return hilbert_gp_predict(*model.hilbert, scaled);
    }
    if (model.method == "full-gp") {
        const auto& gp = *model.full_gp;
        return full_gp_predict(gp.inputs, gp.targets, scaled, gp.hyper,
                               gp.n_guard);
    }
    throw Error(ErrorCode::config, "unknown method '" + model.method + "'");
}

}  // namespace tngp
