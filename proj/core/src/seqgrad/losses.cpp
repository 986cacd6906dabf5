// Copyright 2026 The MGG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mgg/seqgrad/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mgg::seqgrad {

namespace {

template <typename S>
void require_shape(const Matrix<S>& m, const Matrix<S>& like, const char* op, const char* what) {
    if (m.rows() != like.rows() || m.cols() != like.cols()) {
        throw std::invalid_argument(std::string(op) + ": " + what + " is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + " but prediction is " + std::to_string(like.rows()) +
                                    "x" + std::to_string(like.cols()));
    }
}

template <typename S>
void require_finite(const Matrix<S>& m, const char* op) {
    if (!m.allFinite()) throw std::invalid_argument(std::string(op) + ": non-finite input");
}

}  // namespace

template <typename S>
Var binary_cross_entropy(Graph<S>& g, Var pred, const Matrix<S>& target, const Matrix<S>& weight, S normalizer) {
    const Matrix<S>& p = g.value(pred);
    require_shape(target, p, "binary_cross_entropy", "target");
    require_shape(weight, p, "binary_cross_entropy", "weight");
    if (!(normalizer > S(0))) throw std::invalid_argument("binary_cross_entropy: normalizer must be positive");

    const S lo = static_cast<S>(kProbEpsilon);
    const S hi = S(1) - lo;
    double total = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        const S w = weight.data()[j];
        if (w == S(0)) continue;
        const S q = std::clamp(p.data()[j], lo, hi);
        const S t = target.data()[j];
        total -= static_cast<double>(w) * (static_cast<double>(t) * std::log(static_cast<double>(q)) +
                                           (1.0 - static_cast<double>(t)) * std::log(1.0 - static_cast<double>(q)));
    }
    Matrix<S> out(1, 1);
    out(0, 0) = static_cast<S>(total / static_cast<double>(normalizer));

    auto backward = [pred, target, weight, normalizer, lo, hi](Graph<S>& gr, Var self) {
        Matrix<S>* dp = gr.grad_sink(pred);
        if (dp == nullptr) return;
        const S up = gr.upstream(self)(0, 0) / normalizer;
        const Matrix<S>& pv = gr.value(pred);
        for (Eigen::Index j = 0; j < pv.size(); ++j) {
            const S w = weight.data()[j];
            const S q = pv.data()[j];
            if (w == S(0) || q < lo || q > hi) continue;
            const S t = target.data()[j];
            dp->data()[j] += -up * w * (t / q - (S(1) - t) / (S(1) - q));
        }
    };
    return g.record(std::move(out), {pred}, std::move(backward), "binary_cross_entropy");
}

template <typename S>
Var weighted_bce(Graph<S>& g, Var pred, const Matrix<S>& target, S pos_weight, S neg_weight, const Matrix<S>& mask) {
    const Matrix<S>& p = g.value(pred);
    require_shape(target, p, "weighted_bce", "target");
    Matrix<S> m = mask.size() == 0 ? Matrix<S>::Ones(p.rows(), p.cols()) : mask;
    require_shape(m, p, "weighted_bce", "mask");
    const S count = m.sum();
    if (!(count > S(0))) throw std::invalid_argument("weighted_bce: mask selects no entries");
    Matrix<S> weight = (target.array() > S(0.5)).select(pos_weight * m.array(), neg_weight * m.array()).matrix();
    return binary_cross_entropy(g, pred, target, weight, count);
}

double smooth_l1_value(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("smooth_l1: non-finite input");
    const double a = std::abs(x);
    return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

template <typename S>
Var smooth_l1(Graph<S>& g, Var pred, const Matrix<S>& target, const Matrix<S>& row_weight, S normalizer) {
    const Matrix<S>& p = g.value(pred);
    require_shape(target, p, "smooth_l1", "target");
    if (row_weight.rows() != p.rows() || row_weight.cols() != 1) {
        throw std::invalid_argument("smooth_l1: row_weight must be " + std::to_string(p.rows()) + "x1");
    }
    if (!(normalizer > S(0))) throw std::invalid_argument("smooth_l1: normalizer must be positive");
    require_finite(p, "smooth_l1");
    require_finite(target, "smooth_l1");

    double total = 0.0;
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
        if (row_weight(r, 0) == S(0)) continue;
        double row = 0.0;
        for (Eigen::Index c = 0; c < p.cols(); ++c) row += smooth_l1_value(static_cast<double>(p(r, c) - target(r, c)));
        total += static_cast<double>(row_weight(r, 0)) * row;
    }
    Matrix<S> out(1, 1);
    out(0, 0) = static_cast<S>(total / static_cast<double>(normalizer));

    auto backward = [pred, target, row_weight, normalizer](Graph<S>& gr, Var self) {
        Matrix<S>* dp = gr.grad_sink(pred);
        if (dp == nullptr) return;
        const S up = gr.upstream(self)(0, 0) / normalizer;
        const Matrix<S>& pv = gr.value(pred);
        for (Eigen::Index r = 0; r < pv.rows(); ++r) {
            const S w = row_weight(r, 0);
            if (w == S(0)) continue;
            for (Eigen::Index c = 0; c < pv.cols(); ++c) {
                const S d = pv(r, c) - target(r, c);
                const S slope = std::abs(d) < S(1) ? d : (d > S(0) ? S(1) : S(-1));
                (*dp)(r, c) += up * w * slope;
            }
        }
    };
    return g.record(std::move(out), {pred}, std::move(backward), "smooth_l1");
}

template <typename S>
ClassWeights inverse_frequency_weights(const Matrix<S>& target, const Matrix<S>& mask) {
    double n = 0.0;
    double n_pos = 0.0;
    for (Eigen::Index j = 0; j < target.size(); ++j) {
        const double m = mask.size() == 0 ? 1.0 : static_cast<double>(mask.data()[j]);
        if (m == 0.0) continue;
        n += m;
        if (target.data()[j] > S(0.5)) n_pos += m;
    }
    const double n_neg = n - n_pos;
    ClassWeights w;
    if (n_pos > 0.0) w.positive = n / (2.0 * n_pos);
    if (n_neg > 0.0) w.negative = n / (2.0 * n_neg);
    return w;
}

#define MGG_INSTANTIATE_LOSSES(S)                                                                          \
    template Var binary_cross_entropy<S>(Graph<S>&, Var, const Matrix<S>&, const Matrix<S>&, S);          \
    template Var weighted_bce<S>(Graph<S>&, Var, const Matrix<S>&, S, S, const Matrix<S>&);               \
    template Var smooth_l1<S>(Graph<S>&, Var, const Matrix<S>&, const Matrix<S>&, S);                     \
    template ClassWeights inverse_frequency_weights<S>(const Matrix<S>&, const Matrix<S>&);

MGG_INSTANTIATE_LOSSES(float)
MGG_INSTANTIATE_LOSSES(double)

#undef MGG_INSTANTIATE_LOSSES

}  // namespace mgg::seqgrad
