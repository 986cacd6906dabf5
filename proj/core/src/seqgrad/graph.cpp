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

#include "mgg/seqgrad/graph.hpp"

#include <sstream>
#include <stdexcept>

namespace mgg::seqgrad {

namespace {

template <typename S>
void check_shape(const Matrix<S>& data, const char* op) {
    if (data.rows() < 1 || data.cols() < 1) {
        std::ostringstream msg;
        msg << op << ": tensor must have time >= 1 and channels >= 1, got " << data.rows() << "x"
            << data.cols();
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

template <typename S>
const typename Graph<S>::Node& Graph<S>::node(Var v) const {
    if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) {
        throw std::out_of_range("seqgrad: variable does not belong to this graph");
    }
    return nodes_[static_cast<std::size_t>(v.id)];
}

template <typename S>
typename Graph<S>::Node& Graph<S>::node(Var v) {
    return const_cast<Node&>(static_cast<const Graph&>(*this).node(v));
}

template <typename S>
Var Graph<S>::constant(Matrix<S> data) {
    return leaf(std::move(data), false);
}

template <typename S>
Var Graph<S>::leaf(Matrix<S> data, bool requires_grad) {
    check_shape<S>(data, "leaf");
    Node n;
    n.tensor.data = std::move(data);
    n.tensor.requires_grad = requires_grad;
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

template <typename S>
Var Graph<S>::parameter(Parameter<S>& parameter) {
    Var v = leaf(parameter.value, true);
    nodes_.back().parameter = &parameter;
    nodes_.back().op = "parameter";
    return v;
}

template <typename S>
Var Graph<S>::record(Matrix<S> data, std::vector<Var> parents, BackwardFn backward, const char* op_name) {
    check_shape<S>(data, op_name);
    Node n;
    n.tensor.data = std::move(data);
    n.op = op_name;
    for (Var p : parents) {
        const Node& parent = node(p);
        n.tensor.requires_grad = n.tensor.requires_grad || parent.tensor.requires_grad;
        n.parents.push_back(p.id);
    }
    if (n.tensor.requires_grad) n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

template <typename S>
Matrix<S> Graph<S>::grad(Var v) const {
    const Node& n = node(v);
    if (n.tensor.grad.size() == 0) return Matrix<S>::Zero(n.tensor.data.rows(), n.tensor.data.cols());
    return n.tensor.grad;
}

template <typename S>
Matrix<S>* Graph<S>::grad_sink(Var v) {
    Node& n = node(v);
    if (!n.tensor.requires_grad) return nullptr;
    if (n.tensor.grad.size() == 0) n.tensor.grad.setZero(n.tensor.data.rows(), n.tensor.data.cols());
    return &n.tensor.grad;
}

template <typename S>
void Graph<S>::backward(Var loss) {
    Node& seed = node(loss);
    if (seed.tensor.data.rows() != 1 || seed.tensor.data.cols() != 1) {
        std::ostringstream msg;
        msg << "backward: loss must be a 1x1 scalar, got " << seed.tensor.data.rows() << "x"
            << seed.tensor.data.cols() << " from op '" << seed.op << "'";
        throw std::invalid_argument(msg.str());
    }
    for (Node& n : nodes_) n.tensor.grad.resize(0, 0);
    if (!seed.tensor.requires_grad) return;
    seed.tensor.grad = Matrix<S>::Ones(1, 1);

    for (int i = loss.id; i >= 0; --i) {
        Node& n = nodes_[static_cast<std::size_t>(i)];
        if (n.tensor.grad.size() == 0) continue;
        if (n.backward) n.backward(*this, Var{i});
        if (n.parameter != nullptr) {
            if (n.parameter->grad.size() == 0) n.parameter->zero_grad();
            n.parameter->grad += n.tensor.grad;
        }
    }
}

template class Graph<float>;
template class Graph<double>;

}  // namespace mgg::seqgrad
