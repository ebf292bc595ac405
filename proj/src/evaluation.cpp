#include "reconet/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "reconet/error.hpp"

namespace reconet {

namespace {

void check_sizes(const Graph& truth, const ReconstructionResult& r) {
    if (truth.directed())
        throw Error(ErrorKind::UnsupportedInput, "ground truth must be undirected");
    if (static_cast<std::size_t>(r.weights.rows()) != truth.n() ||
        r.weights.rows() != r.weights.cols())
        throw Error(ErrorKind::SizeMismatch, "reconstruction and ground truth differ in size");
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double parse_number(const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
        throw Error(ErrorKind::Parse, "invalid number in threshold spec: '" + text + "'");
    return v;
}

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Whether keeping the top `keep` scores splits a run of equal values.
bool cut_splits_tie(const Matrix& scores, std::size_t keep) {
    std::vector<double> upper;
    for (Eigen::Index i = 0; i < scores.rows(); ++i)
        for (Eigen::Index j = i + 1; j < scores.cols(); ++j) upper.push_back(scores(i, j));
    if (keep == 0 || keep >= upper.size()) return false;
    std::sort(upper.begin(), upper.end(), std::greater<>());
    return upper[keep - 1] == upper[keep];
}

}  // namespace

ThresholdSpec parse_threshold(const std::string& text) {
    if (text == "density") return MatchDensityThreshold{};
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw Error(ErrorKind::Parse, "threshold must be quantile:q, abs:tau, degree:k or density");
    const std::string kind = text.substr(0, colon);
    const double value = parse_number(text.substr(colon + 1));
    if (kind == "quantile") {
        if (value < 0.0 || value > 1.0) throw Error(ErrorKind::Parameter, "quantile must lie in [0, 1]");
        return QuantileThreshold{value};
    }
    if (kind == "abs") {
        if (value < 0.0) throw Error(ErrorKind::Parameter, "absolute threshold must be non-negative");
        return AbsoluteThreshold{value};
    }
    if (kind == "degree") {
        if (value <= 0.0) throw Error(ErrorKind::Parameter, "target degree must be positive");
        return DegreeThreshold{value};
    }
    throw Error(ErrorKind::Parse, "unknown threshold kind '" + kind + "'");
}

std::string to_string(const ThresholdSpec& spec) {
    struct Visitor {
        std::string operator()(const QuantileThreshold& t) const { return "quantile:" + shortest(t.q); }
        std::string operator()(const AbsoluteThreshold& t) const { return "abs:" + shortest(t.tau); }
        std::string operator()(const DegreeThreshold& t) const { return "degree:" + shortest(t.k_avg); }
        std::string operator()(const MatchDensityThreshold&) const { return "density"; }
    };
    return std::visit(Visitor{}, spec);
}

AucResult auc_score(const Graph& truth, const ReconstructionResult& r) {
    check_sizes(truth, r);
    const Matrix scores = symmetrize_max(r).weights.cwiseAbs();
    const std::size_t n = truth.n();

    struct Item {
        double score;
        bool positive;
    };
    std::vector<Item> items;
    items.reserve(n * (n - 1) / 2);
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool pos = truth.has_edge(i, j);
            positives += pos;
            items.push_back({scores(i, j), pos});
        }
    const std::size_t negatives = items.size() - positives;
    if (positives == 0 || negatives == 0) return {0.5, true};

    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.score < b.score; });
    double rank_sum = 0.0;
    for (std::size_t start = 0; start < items.size();) {
        std::size_t stop = start;
        while (stop < items.size() && items[stop].score == items[start].score) ++stop;
        // Ranks are 1-based; a tie group shares the mean of its ranks.
        const double mean_rank = 0.5 * static_cast<double>(start + 1 + stop);
        for (std::size_t k = start; k < stop; ++k)
            if (items[k].positive) rank_sum += mean_rank;
        start = stop;
    }
    const double np = static_cast<double>(positives);
    const double nn = static_cast<double>(negatives);
    return {(rank_sum - np * (np + 1.0) / 2.0) / (np * nn), false};
}

EdgeScoreReport confusion_at_threshold(const Graph& truth, const ReconstructionResult& r,
                                       const Graph& thresholded) {
    check_sizes(truth, r);
    if (thresholded.n() != truth.n())
        throw Error(ErrorKind::SizeMismatch, "thresholded graph and ground truth differ in size");
    EdgeScoreReport report;
    const std::size_t n = truth.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool predicted = thresholded.has_edge(i, j) || thresholded.has_edge(j, i);
            const bool actual = truth.has_edge(i, j);
            if (predicted && actual) ++report.tp;
            else if (predicted) ++report.fp;
            else if (actual) ++report.fn;
            else ++report.tn;
        }
    report.precision = ratio(static_cast<double>(report.tp), static_cast<double>(report.tp + report.fp));
    report.recall = ratio(static_cast<double>(report.tp), static_cast<double>(report.tp + report.fn));
    report.f1 = ratio(2.0 * report.precision * report.recall, report.precision + report.recall);
    const AucResult auc = auc_score(truth, r);
    report.auc = auc.value;
    report.auc_degenerate = auc.degenerate;
    return report;
}

Graph apply_threshold(const Graph& truth, const ReconstructionResult& r, const ThresholdSpec& spec) {
    check_sizes(truth, r);
    const ReconstructionResult sym = symmetrize_max(r);
    struct Visitor {
        const Graph& truth;
        const ReconstructionResult& sym;
        Graph operator()(const QuantileThreshold& t) const { return threshold_quantile(sym, t.q); }
        Graph operator()(const AbsoluteThreshold& t) const { return threshold_absolute(sym, t.tau); }
        Graph operator()(const DegreeThreshold& t) const { return threshold_target_degree(sym, t.k_avg); }
        Graph operator()(const MatchDensityThreshold&) const {
            const std::size_t n = truth.n();
            const std::size_t pairs = n * (n - 1) / 2;
            if (pairs == 0) return threshold_quantile(sym, 0.0);
            return threshold_quantile(sym, static_cast<double>(truth.edge_count()) /
                                               static_cast<double>(pairs));
        }
    };
    return std::visit(Visitor{truth, sym}, spec);
}

EdgeScoreReport score_reconstruction(const Graph& truth, const ReconstructionResult& r,
                                     const ThresholdSpec& spec) {
    const Graph predicted = apply_threshold(truth, r, spec);
    EdgeScoreReport report = confusion_at_threshold(truth, r, predicted);
    if (!std::holds_alternative<AbsoluteThreshold>(spec))
        report.tie_at_cut = cut_splits_tie(symmetrize_max(r).weights.cwiseAbs(),
                                           predicted.edge_count());
    return report;
}

}  // namespace reconet
