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

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace mgg::seqgrad {

// Time-major storage: one row per frame, one column per channel.
template <typename S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Handle to a node inside a Graph. Only meaningful for the graph that issued it.
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

template <typename S>
struct SeqTensor {
    Matrix<S> data;
    Matrix<S> grad;  // empty until backward touches the node
    bool requires_grad = false;

    Eigen::Index time() const { return data.rows(); }
    Eigen::Index channels() const { return data.cols(); }
};

// A learnable tensor that outlives any single graph. Gradients accumulate
// across backward passes until zero_grad().
template <typename S>
struct Parameter {
    Matrix<S> value;
    Matrix<S> grad;

    Parameter() = default;
    explicit Parameter(Matrix<S> v) : value(std::move(v)), grad(Matrix<S>::Zero(value.rows(), value.cols())) {}

    void zero_grad() { grad.setZero(value.rows(), value.cols()); }
    Eigen::Index size() const { return value.size(); }
};

// Tape of operations recorded in construction order. Construction order is a
// valid topological order because a node can only reference earlier nodes.
template <typename S>
class Graph {
   public:
    using BackwardFn = std::function<void(Graph&, Var self)>;

    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;
    Graph(Graph&&) noexcept = default;
    Graph& operator=(Graph&&) noexcept = default;

    Var constant(Matrix<S> data);
    Var leaf(Matrix<S> data, bool requires_grad = true);
    // The node copies the current parameter value; backward adds the node
    // gradient into parameter.grad.
    Var parameter(Parameter<S>& parameter);

    // Records an operation output. The node requires grad iff any parent does;
    // `backward` is only invoked in that case.
    Var record(Matrix<S> data, std::vector<Var> parents, BackwardFn backward, const char* op_name);

    const Matrix<S>& value(Var v) const { return node(v).tensor.data; }
    bool requires_grad(Var v) const { return node(v).tensor.requires_grad; }
    const SeqTensor<S>& tensor(Var v) const { return node(v).tensor; }

    // Gradient of the last backward() w.r.t. v. Zero-filled if v was not reached.
    Matrix<S> grad(Var v) const;

    // Gradient accumulator for use inside BackwardFn. Returns nullptr when the
    // node does not require grad.
    Matrix<S>* grad_sink(Var v);
    // Upstream gradient of an op output inside its BackwardFn.
    const Matrix<S>& upstream(Var v) const { return node(v).tensor.grad; }

    // Seeds d(loss)/d(loss) = 1 and accumulates in reverse construction order.
    void backward(Var loss);

    std::size_t size() const { return nodes_.size(); }

   private:
    struct Node {
        SeqTensor<S> tensor;
        std::vector<int> parents;
        BackwardFn backward;
        Parameter<S>* parameter = nullptr;
        const char* op = "leaf";
    };

    const Node& node(Var v) const;
    Node& node(Var v);

    std::vector<Node> nodes_;
};

extern template class Graph<float>;
extern template class Graph<double>;

}  // namespace mgg::seqgrad
