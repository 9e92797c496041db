#include "commands.hpp"

#include "bksvm/dataio.hpp"
#include "bksvm/model_store.hpp"
#include "bksvm/pipeline.hpp"
#include "bksvm/rng.hpp"
#include "bksvm/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace bksvm::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string data;
    std::string test;
    std::string model;
    std::string out;
    std::string method = "ternary";
    std::string init = "svm";
    std::string loss = "hinge";
    std::size_t p = 2048;
    double sigma = 1.0;
    double lambda = 1e-2;
    std::uint64_t seed = 1;
    std::size_t init_subset = 10000;
    double tol = 1e-6;
    std::size_t max_outer = 50;
    std::size_t max_inner = 20;
    std::vector<double> grid_bounds{-1.5, 1.5, -1.5, 1.5};
    std::size_t grid_res = 200;
    std::size_t samples = 1000;
    // circles
    std::size_t n = 2000;
    double noise = 0.05;
    double inner = 0.5;
    double outer = 1.0;

    FitConfig fit() const {
        FitConfig c;
        c.p = p;
        c.sigma = sigma;
        c.lambda = lambda;
        c.seed = seed;
        c.init = init == "random" ? InitMode::random : InitMode::svm;
        c.init_subset = init_subset;
        c.limits.tol = tol;
        c.limits.max_outer = max_outer;
        c.limits.max_inner = max_inner;
        c.loss = loss == "squared" ? LossKind::squared : LossKind::hinge;
        return c;
    }
};

SparseData read_data(const std::string& path) {
    if (path.empty()) throw UsageError("missing data file");
    try {
        return load_libsvm(path);
    } catch (const std::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

ModelBundle read_model(const std::string& path) {
    if (path.empty()) throw UsageError("missing --model");
    try {
        return load(path);
    } catch (const std::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

Dataset dataset_for(const ModelBundle& bundle, const SparseData& data, const std::string& path) {
    if (data.dim > bundle.d_raw) {
        throw DataError(path + ": feature index " + std::to_string(data.dim) +
                        " exceeds model dimension " + std::to_string(bundle.d_raw));
    }
    try {
        return make_dataset(data, bundle.d_raw, bundle.scaler, bundle.labels);
    } catch (const std::out_of_range& e) {
        throw DataError(path + ": label set mismatch with model: " + e.what());
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw DataError("cannot open '" + path + "' for writing");
    f << std::setprecision(9);
    return f;
}

void check_finite(const TrainResult& r) {
    if (!std::isfinite(r.model.alpha) || !std::isfinite(r.state.objective)) {
        throw NumericError("training produced a non-finite objective or alpha for class " +
                           std::to_string(r.model.class_id));
    }
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
    if (cfg.model.empty()) throw UsageError("train needs --model for the output file");
    const SparseData raw = read_data(cfg.data);
    Scaler scaler;
    LabelMap labels;
    Dataset train;
    try {
        train = make_training_dataset(raw, scaler, labels);
    } catch (const std::invalid_argument& e) {
        throw DataError(cfg.data + ": " + e.what());
    }
    if (labels.size() < 2) throw DataError(cfg.data + ": need at least 2 distinct labels");

    const auto start = std::chrono::steady_clock::now();
    const TernaryFit fit = fit_ternary(train, scaler, labels, cfg.fit());
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& r : fit.results) check_finite(r);

    const std::string trace_path = cfg.out.empty() ? cfg.model + ".trace.csv" : cfg.out;
    {
        auto f = open_out(trace_path);
        f << "class,iteration,alpha,nnz,objective\n";
        for (const auto& r : fit.results) {
            for (const auto& row : r.trace) {
                f << labels.label_of(r.model.class_id) << ',' << row.iteration << ',' << row.alpha << ','
                  << row.nnz << ',' << row.objective << '\n';
            }
        }
    }
    const std::size_t bytes = save(fit.bundle, cfg.model);

    out << std::setprecision(9);
    for (const auto& r : fit.results) {
        const int label = fit.results.size() == 1 ? labels.label_of(0) : labels.label_of(r.model.class_id);
        out << "class " << label << ": objective " << r.state.objective << ", alpha " << r.model.alpha
            << ", nnz " << r.model.nnz() << "/" << r.model.w.size() << ", outer iterations "
            << r.outer_iterations << '\n';
    }
    out << "wrote " << cfg.model << " (" << bytes << " bytes), trace " << trace_path << '\n';
    out << "train time " << std::setprecision(4) << seconds << " s\n";
    return ok;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
    const ModelBundle bundle = read_model(cfg.model);
    const SparseData raw = read_data(cfg.data);
    if (raw.dim > bundle.d_raw) throw DataError(cfg.data + ": more features than the model expects");
    std::ofstream file;
    std::ostream* dst = &out;
    if (!cfg.out.empty()) {
        file = open_out(cfg.out);
        dst = &file;
    }
    *dst << "index,label\n";
    for (std::size_t i = 0; i < raw.samples.size(); ++i) {
        const auto x = densify(raw.samples[i], bundle.d_raw);
        *dst << i << ',' << bundle.labels.label_of(predict_id(bundle, x)) << '\n';
    }
    return ok;
}

constexpr const char* cost_header =
    "method,accuracy,transformation_bits,embedding_bits,classifier_bits,total_bits,bops,flops,"
    "rfe_reference_bits,memory_reduction\n";

void cost_row(std::ostream& out, std::string_view method, double acc, const CostReport& c,
              const CostReport& ref) {
    const double ratio = static_cast<double>(ref.total_bits()) / static_cast<double>(c.total_bits());
    out << method << ',' << std::setprecision(6) << acc << ',' << c.transform_bits << ','
        << c.embedding_bits << ',' << c.classifier_bits << ',' << c.total_bits() << ',' << c.bops << ','
        << c.flops << ',' << ref.total_bits() << ',' << std::setprecision(4) << ratio << '\n';
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
    Method method;
    try {
        method = parse_method(cfg.method);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const std::string& test_path = cfg.test.empty() ? cfg.data : cfg.test;

    if (method == Method::ternary && !cfg.model.empty()) {
        const ModelBundle bundle = read_model(cfg.model);
        const Dataset test = dataset_for(bundle, read_data(test_path), test_path);
        const std::size_t stored = bundle.is_binary() ? 1 : bundle.class_count();
        out << cost_header;
        cost_row(out, "ternary", accuracy(bundle, test), cost_report(bundle),
                 rfe_reference_cost(bundle.d_raw, bundle.embedding_dim(), stored));
        return ok;
    }

    if (cfg.data.empty()) throw UsageError("eval needs --model, or --data for an in-memory fit");
    const SparseData raw_train = read_data(cfg.data);
    Scaler scaler;
    LabelMap labels;
    Dataset train;
    try {
        train = make_training_dataset(raw_train, scaler, labels);
    } catch (const std::invalid_argument& e) {
        throw DataError(cfg.data + ": " + e.what());
    }
    if (labels.size() < 2) throw DataError(cfg.data + ": need at least 2 distinct labels");
    const SparseData raw_test = read_data(test_path);
    if (raw_test.dim > train.d_raw) throw DataError(test_path + ": more features than training data");
    Dataset test;
    try {
        test = make_dataset(raw_test, train.d_raw, scaler, labels);
    } catch (const std::out_of_range& e) {
        throw DataError(test_path + ": label set mismatch with training data: " + e.what());
    }
    const std::size_t stored = labels.size() == 2 ? 1 : labels.size();
    const CostReport ref = rfe_reference_cost(train.d_raw, cfg.p, stored);
    out << cost_header;
    if (method == Method::ternary) {
        const TernaryFit fit = fit_ternary(train, scaler, labels, cfg.fit());
        for (const auto& r : fit.results) check_finite(r);
        cost_row(out, "ternary", accuracy(fit.bundle, test), cost_report(fit.bundle), ref);
    } else {
        const BaselineResult r = fit_baseline(method, train, test, cfg.fit());
        cost_row(out, method_name(method), r.test_accuracy, r.cost, ref);
    }
    return ok;
}

int cmd_grid(const RunConfig& cfg, std::ostream& out) {
    const ModelBundle bundle = read_model(cfg.model);
    if (bundle.d_raw != 2) {
        throw DataError("grid needs a model trained on 2-D data, this one has " +
                        std::to_string(bundle.d_raw) + " features");
    }
    if (cfg.grid_bounds.size() != 4) throw UsageError("--grid-bounds takes x1min,x1max,x2min,x2max");
    const double x0 = cfg.grid_bounds[0], x1 = cfg.grid_bounds[1];
    const double y0 = cfg.grid_bounds[2], y1 = cfg.grid_bounds[3];
    if (!(x1 > x0) || !(y1 > y0)) throw UsageError("--grid-bounds must satisfy min < max");
    if (cfg.grid_res == 0) throw UsageError("--grid-res must be positive");

    std::ofstream file;
    std::ostream* dst = &out;
    if (!cfg.out.empty()) {
        file = open_out(cfg.out);
        dst = &file;
    }
    *dst << std::setprecision(9) << "x1,x2,score,predicted_label\n";
    const double n = static_cast<double>(cfg.grid_res);
    for (std::size_t i = 0; i < cfg.grid_res; ++i) {
        const double a = x0 + (static_cast<double>(i) + 0.5) * (x1 - x0) / n;
        for (std::size_t j = 0; j < cfg.grid_res; ++j) {
            const double b = y0 + (static_cast<double>(j) + 0.5) * (y1 - y0) / n;
            const std::vector<double> raw{a, b};
            const auto x = prepare_input(bundle, raw);
            const auto scores = decision_scores(bundle, embed(bundle.embedding, x));
            double score;
            std::uint32_t id;
            if (bundle.is_binary()) {
                score = static_cast<double>(bundle.alphas[0]) * scores[0];
                id = scores[0] >= 0 ? 0 : 1;
            } else {
                id = static_cast<std::uint32_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
                score = scores[id];
            }
            *dst << a << ',' << b << ',' << score << ',' << bundle.labels.label_of(id) << '\n';
        }
    }
    return ok;
}

template <class F>
double median_ns(std::size_t samples, F&& f) {
    std::vector<double> t(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const auto s = std::chrono::steady_clock::now();
        f(i);
        t[i] = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - s).count();
    }
    std::nth_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(samples / 2), t.end());
    return t[samples / 2];
}

double float_dot(std::span<const float> w, std::span<const double> z) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += static_cast<double>(w[j]) * z[j];
    return s;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
    const ModelBundle bundle = read_model(cfg.model);
    const SparseData raw = read_data(cfg.data);
    if (raw.samples.empty()) throw DataError(cfg.data + ": no samples");
    if (raw.dim > bundle.d_raw) throw DataError(cfg.data + ": more features than the model expects");
    if (cfg.samples == 0) throw UsageError("--samples must be positive");

    std::vector<std::vector<double>> xs;
    xs.reserve(raw.samples.size());
    for (const auto& s : raw.samples) xs.push_back(prepare_input(bundle, densify(s, bundle.d_raw)));
    const auto x_at = [&](std::size_t i) -> const std::vector<double>& { return xs[i % xs.size()]; };

    const std::size_t d = bundle.embedding.input_dim();
    const std::size_t p = bundle.embedding_dim();
    const std::size_t models = bundle.is_binary() ? 1 : bundle.class_count();
    Rng rng(cfg.seed);
    const GaussianProjection proj(d, p, bundle.embedding.transform.sigma(), rng);
    std::vector<float> weights(models * p);
    for (auto& w : weights) w = static_cast<float>(rng.normal());
    const auto& offset = bundle.embedding.offset;

    volatile double sink = 0.0;
    std::vector<double> z;
    const auto float_predict = [&](std::size_t) {
        double best = -INFINITY;
        for (std::size_t k = 0; k < models; ++k) {
            best = std::max(best, float_dot(std::span<const float>(weights).subspan(k * p, p), z));
        }
        sink = sink + best;
    };

    out << "method,embed_ns,predict_ns,samples\n" << std::fixed << std::setprecision(1);

    const double rfe_embed = median_ns(cfg.samples, [&](std::size_t i) {
        z = rfe_features(proj, offset, x_at(i));
    });
    const double rfe_predict = median_ns(cfg.samples, float_predict);
    out << "rfe-full," << rfe_embed << ',' << rfe_predict << ',' << cfg.samples << '\n';

    const double ff_embed = median_ns(cfg.samples, [&](std::size_t i) {
        z = rfe_features(bundle.embedding.transform, offset, x_at(i));
    });
    const double ff_predict = median_ns(cfg.samples, float_predict);
    out << "fastfood-full," << ff_embed << ',' << ff_predict << ',' << cfg.samples << '\n';

    BitVector code;
    const double tern_embed = median_ns(cfg.samples, [&](std::size_t i) {
        code = bundle.is_binary() ? embed_selected(bundle.embedding, x_at(i), bundle.binary.keep_mask)
                                  : embed(bundle.embedding, x_at(i));
    });
    const double tern_predict = median_ns(cfg.samples, [&](std::size_t) {
        if (bundle.is_binary()) {
            sink = sink + static_cast<double>(dot_binary(code, bundle.binary.weights));
        } else {
            std::int64_t best = INT64_MIN;
            for (const auto& c : bundle.classes) best = std::max(best, dot_masked(code, c));
            sink = sink + static_cast<double>(best);
        }
    });
    out << "ternary," << tern_embed << ',' << tern_predict << ',' << cfg.samples << '\n';
    return ok;
}

nlohmann::json cost_json(const CostReport& c) {
    return {{"transformation_bits", c.transform_bits},
            {"embedding_bits", c.embedding_bits},
            {"classifier_bits", c.classifier_bits},
            {"total_bits", c.total_bits()},
            {"bops", c.bops},
            {"flops", c.flops}};
}

int cmd_inspect(const RunConfig& cfg, std::ostream& out) {
    const ModelBundle bundle = read_model(cfg.model);
    const auto& t = bundle.embedding.transform;
    const ModelFileLayout layout = model_file_layout(bundle);
    nlohmann::json j;
    j["header"] = {{"version", model_format_version},
                   {"d_raw", bundle.d_raw},
                   {"d_padded", t.input_dim()},
                   {"p", t.output_dim()},
                   {"class_count", bundle.class_count()},
                   {"sigma", t.sigma()},
                   {"lambda", bundle.lambda},
                   {"seed", t.seed()},
                   {"blocks", t.blocks().size()},
                   {"labels", bundle.labels.classes}};
    nlohmann::json classifiers = nlohmann::json::array();
    if (bundle.is_binary()) {
        classifiers.push_back({{"positive_label", bundle.labels.label_of(0)},
                               {"alpha", bundle.alphas[0]},
                               {"nnz", bundle.binary.active()}});
    } else {
        for (std::size_t k = 0; k < bundle.classes.size(); ++k) {
            classifiers.push_back({{"label", bundle.labels.label_of(k)},
                                   {"alpha", bundle.alphas[k]},
                                   {"nnz", bundle.classes[k].support.popcount()}});
        }
    }
    j["classifiers"] = classifiers;
    const std::size_t stored = bundle.is_binary() ? 1 : bundle.class_count();
    j["cost"] = cost_json(cost_report(bundle));
    j["rfe_reference_cost"] = cost_json(rfe_reference_cost(bundle.d_raw, t.output_dim(), stored));
    j["file_layout_bytes"] = {{"header", layout.header},         {"labels", layout.labels},
                              {"scaler", layout.scaler},         {"transform", layout.transform},
                              {"offsets", layout.offsets},       {"alphas", layout.alphas},
                              {"classifier", layout.classifier}, {"total", layout.total()}};
    out << j.dump(2) << '\n';
    return ok;
}

int cmd_circles(const RunConfig& cfg, std::ostream& out) {
    CirclesConfig c;
    c.n = cfg.n;
    c.seed = cfg.seed;
    c.noise = cfg.noise;
    c.inner_radius = cfg.inner;
    c.outer_radius = cfg.outer;
    const SparseData data = make_circles(c);
    std::ofstream file;
    std::ostream* dst = &out;
    if (!cfg.out.empty()) {
        file = open_out(cfg.out);
        dst = &file;
    }
    for (const auto& s : data.samples) *dst << format_libsvm(s) << '\n';
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Binary-embedding kernel SVM with ternary coefficients", "bksvm"};
    app.require_subcommand(1);
    RunConfig cfg;

    const auto data_opt = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--data", cfg.data, "LIBSVM-format data file");
        if (required) o->required();
    };
    const auto model_opt = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model, "model file")->required();
    };
    const auto fit_opts = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "embedding dimension")->check(CLI::PositiveNumber);
        sub->add_option("--sigma", cfg.sigma, "Gaussian kernel width")->check(CLI::PositiveNumber);
        sub->add_option("--lambda", cfg.lambda, "regularization weight")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--init", cfg.init, "initialization")->check(CLI::IsMember({"svm", "random"}));
        sub->add_option("--init-subset", cfg.init_subset, "rows used by the initializing SVM")
            ->check(CLI::PositiveNumber);
        sub->add_option("--tol", cfg.tol, "relative objective decrease to stop at")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--max-outer", cfg.max_outer, "maximum outer iterations");
        sub->add_option("--max-inner", cfg.max_inner, "maximum sweeps over w per outer iteration");
        sub->add_option("--loss", cfg.loss, "loss function")->check(CLI::IsMember({"hinge", "squared"}));
    };

    auto* train = app.add_subcommand("train", "train a ternary model and write it with its trace");
    data_opt(train, true);
    train->add_option("--model", cfg.model, "output model file")->required();
    train->add_option("--out", cfg.out, "trace CSV (default: <model>.trace.csv)");
    fit_opts(train);

    auto* predict = app.add_subcommand("predict", "print predicted labels");
    model_opt(predict);
    data_opt(predict, true);
    predict->add_option("--out", cfg.out, "output CSV (default: stdout)");

    auto* eval = app.add_subcommand("eval", "accuracy and memory cost report");
    eval->add_option("--model", cfg.model, "model file (ternary method)");
    data_opt(eval, false);
    eval->add_option("--test", cfg.test, "labeled test file");
    eval->add_option("--method", cfg.method, "ternary, fastfood-full, rfe-full or bjle")
        ->check(CLI::IsMember({"ternary", "fastfood-full", "rfe-full", "bjle"}));
    fit_opts(eval);

    auto* bench = app.add_subcommand("bench", "per-sample embed and predict timings");
    model_opt(bench);
    data_opt(bench, true);
    bench->add_option("--samples", cfg.samples, "timed samples per stage (rows are cycled)");
    bench->add_option("--seed", cfg.seed, "seed for the explicit-matrix baseline");

    auto* inspect = app.add_subcommand("inspect", "print model header and cost report as JSON");
    model_opt(inspect);

    auto* grid = app.add_subcommand("grid", "evaluate a 2-D model on a regular grid");
    model_opt(grid);
    grid->add_option("--grid-bounds", cfg.grid_bounds, "x1min x1max x2min x2max")->expected(4)->delimiter(',');
    grid->add_option("--grid-res", cfg.grid_res, "cells per axis");
    grid->add_option("--out", cfg.out, "output CSV (default: stdout)");

    auto* circles = app.add_subcommand("circles", "write a two-annuli data set in LIBSVM format");
    circles->add_option("--n", cfg.n, "number of samples");
    circles->add_option("--seed", cfg.seed, "random seed");
    circles->add_option("--noise", cfg.noise, "radial noise std-dev")->check(CLI::NonNegativeNumber);
    circles->add_option("--inner", cfg.inner, "inner radius");
    circles->add_option("--outer", cfg.outer, "outer radius");
    circles->add_option("--out", cfg.out, "output file (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (*train) return cmd_train(cfg, out);
        if (*predict) return cmd_predict(cfg, out);
        if (*eval) return cmd_eval(cfg, out);
        if (*bench) return cmd_bench(cfg, out);
        if (*inspect) return cmd_inspect(cfg, out);
        if (*grid) return cmd_grid(cfg, out);
        if (*circles) return cmd_circles(cfg, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return numeric_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    }
    return usage;
}

}  // namespace bksvm::cli
