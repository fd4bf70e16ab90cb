#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "kahlab/jet.hpp"
#include "kahlab/types.hpp"

namespace kahlab {

/// Closed-form scalar field on the four-dimensional chart.
///
/// Grammar: numbers, the variables p1..p4, the constant `pi`, the binary
/// operators + - * / ^ (right associative, numeric-constant exponent), unary
/// minus and the functions sin cos tan exp log sqrt sinh cosh tanh. Evaluation
/// is available in plain doubles or as a second-order jet, which provides the
/// exact gradient and Hessian.
class Expression {
public:
    static Expression parse(std::string_view text);

    double operator()(const Vec4& p) const;
    Jet2 jet(const Vec4& p) const;

    const std::string& text() const { return text_; }

    struct Node;

private:
    Expression(std::shared_ptr<const Node> root, std::string text)
        : root_(std::move(root)), text_(std::move(text)) {}

    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace kahlab
