#include "mtm/eval/metrics.hpp"

#include "mtm/core/error.hpp"

#include <cmath>

namespace mtm::eval {

RegressionMetrics regression_metrics(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw ShapeError("prediction and truth lengths differ");
    if (pred.empty()) throw EmptyInputError("regression metrics need at least one sample");
    RegressionMetrics m;
    m.samples = pred.size();
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - truth[i];
        m.mse += e * e;
        m.mae += std::abs(e);
    }
    m.mse /= static_cast<double>(m.samples);
    m.mae /= static_cast<double>(m.samples);
    return m;
}

ConfusionCounts confusion(std::span<const int> pred, std::span<const int> truth, int positive) {
    if (pred.size() != truth.size()) throw ShapeError("prediction and truth lengths differ");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] == positive;
        const bool t = truth[i] == positive;
        if (p && t) ++c.tp;
        else if (p) ++c.fp;
        else if (t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

ClassificationMetrics classification_metrics(const ConfusionCounts& c) {
    ClassificationMetrics m;
    m.counts = c;
    const auto ratio = [](std::size_t num, std::size_t den, bool& undefined) {
        undefined = den == 0;
        return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    m.accuracy = ratio(c.tp + c.tn, c.total(), m.accuracy_undefined);
    m.precision = ratio(c.tp, c.tp + c.fp, m.precision_undefined);
    m.recall = ratio(c.tp, c.tp + c.fn, m.recall_undefined);
    // 2PR/(P+R) == 2TP/(2TP+FP+FN), which avoids a second rounding.
    m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, m.f1_undefined);
    return m;
}

ClassificationMetrics classification_metrics(std::span<const int> pred, std::span<const int> truth, int positive) {
    return classification_metrics(confusion(pred, truth, positive));
}

} // namespace mtm::eval
