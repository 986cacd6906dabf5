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

#include "mgg/seqgrad/ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace mgg::seqgrad {

using Index = Eigen::Index;

void ConvSpec::validate() const {
    std::ostringstream msg;
    if (filters < 1) msg << "filters must be >= 1 (got " << filters << "); ";
    if (kernel < 1 || kernel % 2 == 0) msg << "kernel must be odd and >= 1 (got " << kernel << "); ";
    if (stride < 1) msg << "stride must be >= 1 (got " << stride << "); ";
    const std::string err = msg.str();
    if (!err.empty()) throw std::invalid_argument("ConvSpec: " + err);
}

Index ConvSpec::output_time(Index time) const {
    if (padding == Padding::kSame) return (time + stride - 1) / stride;
    if (time < kernel) return 0;
    return (time - kernel) / stride + 1;
}

namespace {

template <typename S>
Matrix<S> im2col(const Matrix<S>& x, int kernel, int stride, int pad, Index out_time) {
    const Index time = x.rows();
    const Index channels = x.cols();
    Matrix<S> cols = Matrix<S>::Zero(out_time, kernel * channels);
    for (Index o = 0; o < out_time; ++o) {
        for (int tap = 0; tap < kernel; ++tap) {
            const Index t = o * stride + tap - pad;
            if (t < 0 || t >= time) continue;
            cols.row(o).segment(tap * channels, channels) = x.row(t);
        }
    }
    return cols;
}

// Adjoint of im2col: scatters column blocks back onto the frames they were read from.
template <typename S>
Matrix<S> col2im(const Matrix<S>& cols, Index time, Index channels, int kernel, int stride, int pad) {
    Matrix<S> x = Matrix<S>::Zero(time, channels);
    for (Index o = 0; o < cols.rows(); ++o) {
        for (int tap = 0; tap < kernel; ++tap) {
            const Index t = o * stride + tap - pad;
            if (t < 0 || t >= time) continue;
            x.row(t) += cols.row(o).segment(tap * channels, channels);
        }
    }
    return x;
}

std::string shape_str(Index r, Index c) {
    std::ostringstream s;
    s << r << "x" << c;
    return s.str();
}

template <typename S>
void check_bias(const Matrix<S>& b, Index filters, const char* op) {
    if (b.rows() != 1 || b.cols() != filters) {
        throw std::invalid_argument(std::string(op) + ": bias must be 1x" + std::to_string(filters) +
                                    ", got " + shape_str(b.rows(), b.cols()));
    }
}

template <typename S>
void check_same_shape(const Matrix<S>& a, const Matrix<S>& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_str(a.rows(), a.cols()) +
                                    " vs " + shape_str(b.rows(), b.cols()));
    }
}

}  // namespace

template <typename S>
Var conv1d(Graph<S>& g, Var input, Var weight, Var bias, const ConvSpec& spec) {
    spec.validate();
    const Matrix<S>& x = g.value(input);
    const Matrix<S>& w = g.value(weight);
    const Index in_ch = x.cols();
    if (w.rows() != spec.kernel * in_ch || w.cols() != spec.filters) {
        throw std::invalid_argument("conv1d: weight must be " + shape_str(spec.kernel * in_ch, spec.filters) +
                                    " for " + std::to_string(in_ch) + " input channels, got " +
                                    shape_str(w.rows(), w.cols()));
    }
    check_bias(g.value(bias), spec.filters, "conv1d");
    const Index out_time = spec.output_time(x.rows());
    if (out_time < 1) {
        throw std::invalid_argument("conv1d: input of " + std::to_string(x.rows()) +
                                    " frames is shorter than the kernel (" + std::to_string(spec.kernel) + ")");
    }

    const int pad = spec.left_pad();
    Matrix<S> cols = im2col(x, spec.kernel, spec.stride, pad, out_time);
    Matrix<S> out(out_time, spec.filters);
    out.noalias() = cols * w;
    out.rowwise() += g.value(bias).row(0);

    const Index time = x.rows();
    auto backward = [input, weight, bias, spec, pad, time, in_ch, cols = std::move(cols)](Graph<S>& gr, Var self) {
        const Matrix<S>& gy = gr.upstream(self);
        if (Matrix<S>* dx = gr.grad_sink(input)) {
            Matrix<S> dcols(gy.rows(), cols.cols());
            dcols.noalias() = gy * gr.value(weight).transpose();
            *dx += col2im(dcols, time, in_ch, spec.kernel, spec.stride, pad);
        }
        if (Matrix<S>* dw = gr.grad_sink(weight)) dw->noalias() += cols.transpose() * gy;
        if (Matrix<S>* db = gr.grad_sink(bias)) *db += gy.colwise().sum();
    };
    Var lin = g.record(std::move(out), {input, weight, bias}, std::move(backward), "conv1d");
    return activate(g, lin, spec.activation);
}

template <typename S>
Var deconv1d(Graph<S>& g, Var input, Var weight, Var bias, const ConvSpec& spec) {
    spec.validate();
    if (spec.padding != Padding::kSame) throw std::invalid_argument("deconv1d: only same padding is supported");
    const Matrix<S>& y = g.value(input);
    const Matrix<S>& w = g.value(weight);
    const Index in_ch = y.cols();
    if (w.rows() != spec.kernel * spec.filters || w.cols() != in_ch) {
        throw std::invalid_argument("deconv1d: weight must be " + shape_str(spec.kernel * spec.filters, in_ch) +
                                    " for " + std::to_string(in_ch) + " input channels, got " +
                                    shape_str(w.rows(), w.cols()));
    }
    check_bias(g.value(bias), spec.filters, "deconv1d");

    const int pad = spec.left_pad();
    const Index in_time = y.rows();
    const Index out_time = in_time * spec.stride;
    Matrix<S> cols(in_time, w.rows());
    cols.noalias() = y * w.transpose();
    Matrix<S> out = col2im(cols, out_time, spec.filters, spec.kernel, spec.stride, pad);
    out.rowwise() += g.value(bias).row(0);

    auto backward = [input, weight, bias, spec, pad, in_time](Graph<S>& gr, Var self) {
        const Matrix<S>& gy = gr.upstream(self);
        Matrix<S> dcols = im2col(gy, spec.kernel, spec.stride, pad, in_time);
        if (Matrix<S>* dy = gr.grad_sink(input)) dy->noalias() += dcols * gr.value(weight);
        if (Matrix<S>* dw = gr.grad_sink(weight)) dw->noalias() += dcols.transpose() * gr.value(input);
        if (Matrix<S>* db = gr.grad_sink(bias)) *db += gy.colwise().sum();
    };
    Var lin = g.record(std::move(out), {input, weight, bias}, std::move(backward), "deconv1d");
    return activate(g, lin, spec.activation);
}

template <typename S>
Var maxpool1d(Graph<S>& g, Var input, int window, int stride) {
    const Matrix<S>& x = g.value(input);
    if (window < 1 || stride < 1) throw std::invalid_argument("maxpool1d: window and stride must be >= 1");
    if (window > x.rows()) {
        throw std::invalid_argument("maxpool1d: window " + std::to_string(window) + " exceeds input length " +
                                    std::to_string(x.rows()));
    }
    const Index out_time = (x.rows() - window) / stride + 1;
    const Index channels = x.cols();
    Matrix<S> out(out_time, channels);
    std::vector<Index> argmax(static_cast<std::size_t>(out_time * channels));
    for (Index o = 0; o < out_time; ++o) {
        for (Index c = 0; c < channels; ++c) {
            Index best = o * stride;
            for (Index t = best + 1; t < o * stride + window; ++t) {
                if (x(t, c) > x(best, c)) best = t;
            }
            out(o, c) = x(best, c);
            argmax[static_cast<std::size_t>(o * channels + c)] = best;
        }
    }
    auto backward = [input, channels, argmax = std::move(argmax)](Graph<S>& gr, Var self) {
        Matrix<S>* dx = gr.grad_sink(input);
        if (dx == nullptr) return;
        const Matrix<S>& gy = gr.upstream(self);
        for (Index o = 0; o < gy.rows(); ++o) {
            for (Index c = 0; c < channels; ++c) {
                (*dx)(argmax[static_cast<std::size_t>(o * channels + c)], c) += gy(o, c);
            }
        }
    };
    return g.record(std::move(out), {input}, std::move(backward), "maxpool1d");
}

template <typename S>
Var relu(Graph<S>& g, Var x) {
    Matrix<S> out = g.value(x).cwiseMax(S(0));
    auto backward = [x](Graph<S>& gr, Var self) {
        Matrix<S>* dx = gr.grad_sink(x);
        if (dx == nullptr) return;
        const Matrix<S>& v = gr.value(x);
        *dx += (v.array() > S(0)).select(gr.upstream(self), S(0)).matrix();
    };
    return g.record(std::move(out), {x}, std::move(backward), "relu");
}

template <typename S>
Var sigmoid(Graph<S>& g, Var x) {
    Matrix<S> out = g.value(x).unaryExpr([](S v) {
        if (v >= S(0)) return S(1) / (S(1) + std::exp(-v));
        const S e = std::exp(v);
        return e / (S(1) + e);
    });
    auto backward = [x](Graph<S>& gr, Var self) {
        Matrix<S>* dx = gr.grad_sink(x);
        if (dx == nullptr) return;
        const auto y = gr.value(self).array();
        *dx += (gr.upstream(self).array() * y * (S(1) - y)).matrix();
    };
    return g.record(std::move(out), {x}, std::move(backward), "sigmoid");
}

template <typename S>
Var activate(Graph<S>& g, Var x, Activation act) {
    switch (act) {
        case Activation::kReLU:
            return relu(g, x);
        case Activation::kSigmoid:
            return sigmoid(g, x);
        case Activation::kNone:
            break;
    }
    return x;
}

template <typename S>
Var add(Graph<S>& g, Var a, Var b) {
    check_same_shape(g.value(a), g.value(b), "add");
    Matrix<S> out = g.value(a) + g.value(b);
    auto backward = [a, b](Graph<S>& gr, Var self) {
        if (Matrix<S>* da = gr.grad_sink(a)) *da += gr.upstream(self);
        if (Matrix<S>* db = gr.grad_sink(b)) *db += gr.upstream(self);
    };
    return g.record(std::move(out), {a, b}, std::move(backward), "add");
}

template <typename S>
Var mul(Graph<S>& g, Var a, Var b) {
    check_same_shape(g.value(a), g.value(b), "mul");
    Matrix<S> out = g.value(a).cwiseProduct(g.value(b));
    auto backward = [a, b](Graph<S>& gr, Var self) {
        const Matrix<S>& gy = gr.upstream(self);
        if (Matrix<S>* da = gr.grad_sink(a)) *da += gy.cwiseProduct(gr.value(b));
        if (Matrix<S>* db = gr.grad_sink(b)) *db += gy.cwiseProduct(gr.value(a));
    };
    return g.record(std::move(out), {a, b}, std::move(backward), "mul");
}

template <typename S>
Var scale(Graph<S>& g, Var x, S factor) {
    Matrix<S> out = g.value(x) * factor;
    auto backward = [x, factor](Graph<S>& gr, Var self) {
        if (Matrix<S>* dx = gr.grad_sink(x)) *dx += gr.upstream(self) * factor;
    };
    return g.record(std::move(out), {x}, std::move(backward), "scale");
}

template <typename S>
Var sum(Graph<S>& g, Var x) {
    Matrix<S> out(1, 1);
    out(0, 0) = g.value(x).sum();
    auto backward = [x](Graph<S>& gr, Var self) {
        if (Matrix<S>* dx = gr.grad_sink(x)) dx->array() += gr.upstream(self)(0, 0);
    };
    return g.record(std::move(out), {x}, std::move(backward), "sum");
}

template <typename S>
Var flatten_rows(Graph<S>& g, std::span<const Var> inputs, int width) {
    if (inputs.empty()) throw std::invalid_argument("flatten_rows: no inputs");
    if (width < 1) throw std::invalid_argument("flatten_rows: width must be >= 1");
    Index total = 0;
    for (Var v : inputs) {
        const Matrix<S>& m = g.value(v);
        if (m.cols() % width != 0) {
            throw std::invalid_argument("flatten_rows: " + std::to_string(m.cols()) +
                                        " columns is not a multiple of width " + std::to_string(width));
        }
        total += m.size();
    }
    Matrix<S> out(total / width, width);
    Index offset = 0;
    for (Var v : inputs) {
        const Matrix<S>& m = g.value(v);
        std::copy(m.data(), m.data() + m.size(), out.data() + offset);
        offset += m.size();
    }
    std::vector<Var> parents(inputs.begin(), inputs.end());
    auto backward = [parents](Graph<S>& gr, Var self) {
        const Matrix<S>& gy = gr.upstream(self);
        Index off = 0;
        for (Var v : parents) {
            const Index n = gr.value(v).size();
            if (Matrix<S>* dv = gr.grad_sink(v)) {
                Eigen::Map<const Eigen::Matrix<S, Eigen::Dynamic, 1>> src(gy.data() + off, n);
                Eigen::Map<Eigen::Matrix<S, Eigen::Dynamic, 1>>(dv->data(), n) += src;
            }
            off += n;
        }
    };
    return g.record(std::move(out), std::move(parents), std::move(backward), "flatten_rows");
}

template <typename S>
Var bilinear_match(Graph<S>& g, Var h1, Var h2, Var weight, Var bias, int rank) {
    const Matrix<S>& x1 = g.value(h1);
    const Matrix<S>& x2 = g.value(h2);
    const Matrix<S>& w = g.value(weight);
    check_same_shape(x1, x2, "bilinear_match");
    if (rank < 1) throw std::invalid_argument("bilinear_match: rank must be >= 1");
    const Index dim = x1.cols();
    if (w.rows() != dim || w.cols() != dim * rank) {
        throw std::invalid_argument("bilinear_match: weight must be " + shape_str(dim, dim * rank) + ", got " +
                                    shape_str(w.rows(), w.cols()));
    }
    check_bias(g.value(bias), dim * rank, "bilinear_match");

    const Index time = x1.rows();
    Matrix<S> a(time, dim * rank);
    Matrix<S> b(time, dim * rank);
    a.noalias() = x1 * w;
    b.noalias() = x2 * w;
    a.rowwise() += g.value(bias).row(0);
    b.rowwise() += g.value(bias).row(0);

    Matrix<S> out(time, dim);
    for (Index n = 0; n < time; ++n) {
        const S* pa = a.data() + n * dim * rank;
        const S* pb = b.data() + n * dim * rank;
        for (Index i = 0; i < dim; ++i) {
            S acc = 0;
            for (Index k = 0; k < rank; ++k) acc += pa[i * rank + k] * pb[i * rank + k];
            out(n, i) = acc;
        }
    }

    auto backward = [h1, h2, weight, bias, rank, a = std::move(a), b = std::move(b)](Graph<S>& gr, Var self) {
        const Matrix<S>& gy = gr.upstream(self);
        const Index t = gy.rows();
        const Index d = gy.cols();
        Matrix<S> da(t, d * rank);
        Matrix<S> db(t, d * rank);
        for (Index n = 0; n < t; ++n) {
            for (Index i = 0; i < d; ++i) {
                const S gni = gy(n, i);
                for (Index k = 0; k < rank; ++k) {
                    const Index j = i * rank + k;
                    da(n, j) = gni * b(n, j);
                    db(n, j) = gni * a(n, j);
                }
            }
        }
        const Matrix<S>& wv = gr.value(weight);
        if (Matrix<S>* dh1 = gr.grad_sink(h1)) dh1->noalias() += da * wv.transpose();
        if (Matrix<S>* dh2 = gr.grad_sink(h2)) dh2->noalias() += db * wv.transpose();
        if (Matrix<S>* dw = gr.grad_sink(weight)) {
            dw->noalias() += gr.value(h1).transpose() * da;
            dw->noalias() += gr.value(h2).transpose() * db;
        }
        if (Matrix<S>* dbias = gr.grad_sink(bias)) *dbias += da.colwise().sum() + db.colwise().sum();
    };
    return g.record(std::move(out), {h1, h2, weight, bias}, std::move(backward), "bilinear_match");
}

template <typename S>
Matrix<S> uniform_fan_in(Index rows, Index cols, Index fan_in, std::mt19937_64& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(std::max<Index>(fan_in, 1)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix<S> m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<S>(dist(rng));
    return m;
}

#define MGG_INSTANTIATE_OPS(S)                                                                  \
    template Var conv1d<S>(Graph<S>&, Var, Var, Var, const ConvSpec&);                          \
    template Var deconv1d<S>(Graph<S>&, Var, Var, Var, const ConvSpec&);                        \
    template Var maxpool1d<S>(Graph<S>&, Var, int, int);                                        \
    template Var relu<S>(Graph<S>&, Var);                                                       \
    template Var sigmoid<S>(Graph<S>&, Var);                                                    \
    template Var activate<S>(Graph<S>&, Var, Activation);                                       \
    template Var add<S>(Graph<S>&, Var, Var);                                                   \
    template Var mul<S>(Graph<S>&, Var, Var);                                                   \
    template Var scale<S>(Graph<S>&, Var, S);                                                   \
    template Var sum<S>(Graph<S>&, Var);                                                        \
    template Var flatten_rows<S>(Graph<S>&, std::span<const Var>, int);                         \
    template Var bilinear_match<S>(Graph<S>&, Var, Var, Var, Var, int);                         \
    template Matrix<S> uniform_fan_in<S>(Index, Index, Index, std::mt19937_64&);

MGG_INSTANTIATE_OPS(float)
MGG_INSTANTIATE_OPS(double)

#undef MGG_INSTANTIATE_OPS

}  // namespace mgg::seqgrad
