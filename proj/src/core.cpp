#include "agg/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace agg {

UnitValue::UnitValue(double v) : v_(v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("UnitValue out of [0,1]: " + std::to_string(v));
}

GridPoint::GridPoint(std::int64_t numerator, std::int64_t denominator)
    : num_(numerator), den_(denominator) {
    if (den_ <= 0) throw std::invalid_argument("GridPoint: denominator must be positive");
    if (num_ < 0) throw std::invalid_argument("GridPoint: numerator must be nonnegative");
    if (num_ > den_) throw std::invalid_argument("GridPoint: value above 1");
    if (num_ == 0) { den_ = 1; return; }
    std::int64_t g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
}

InputVector::InputVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("InputVector: length must be >= 1");
    for (double c : coords_)
        if (!(c >= 0.0 && c <= 1.0))
            throw std::invalid_argument("InputVector: coordinate out of [0,1]");
}

bool InputVector::leq(const InputVector& other) const {
    if (size() != other.size())
        throw std::invalid_argument("InputVector: arity mismatch in comparison");
    for (int i = 0; i < size(); ++i)
        if (coords_[i] > other.coords_[i]) return false;
    return true;
}

bool InputVector::all_zeros() const {
    return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c == 0.0; });
}

bool InputVector::all_ones() const {
    return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c == 1.0; });
}

std::vector<int> InputVector::support() const {
    std::vector<int> idx;
    for (int i = 0; i < size(); ++i)
        if (coords_[i] != 0.0) idx.push_back(i);
    return idx;
}

// --- BasisExpr constructors ------------------------------------------------

BasisExpr::BasisExpr(NodeKind k, int index, int arity, std::optional<Param> p,
                     std::vector<ExprPtr> children)
    : kind_(k), index_(index), arity_(arity), param_(std::move(p)),
      children_(std::move(children)) {
    constexpr std::uint64_t cap = std::uint64_t(1) << 62;
    for (const auto& c : children_)
        size_ = std::min(cap, size_ + std::min(cap, c->size_));
    if (kind_ == NodeKind::meet && children_.size() > 1) {
        bool uniform = true;
        for (const auto& c : children_) uniform = uniform && c->size_ == children_[0]->size_;
        if (!uniform) {
            eval_order_.resize(children_.size());
            for (std::uint32_t i = 0; i < eval_order_.size(); ++i) eval_order_[i] = i;
            std::stable_sort(eval_order_.begin(), eval_order_.end(),
                             [&](std::uint32_t a, std::uint32_t b) {
                                 return children_[a]->size_ < children_[b]->size_;
                             });
        }
    }
}

ExprPtr BasisExpr::proj(int index, int arity) {
    if (arity < 1) throw std::invalid_argument("proj: arity must be >= 1");
    if (index < 0 || index >= arity)
        throw std::invalid_argument("proj: index out of range");
    return ExprPtr(new BasisExpr(NodeKind::proj, index, arity, std::nullopt, {}));
}

ExprPtr BasisExpr::chi(Param a, ExprPtr child) {
    if (!child) throw std::invalid_argument("chi: null child");
    int n = child->arity();
    std::vector<ExprPtr> cs{std::move(child)};
    return ExprPtr(new BasisExpr(NodeKind::chi, 0, n, a, std::move(cs)));
}

ExprPtr BasisExpr::med(Param b, ExprPtr left, ExprPtr right) {
    if (!left || !right) throw std::invalid_argument("med: null child");
    if (left->arity() != right->arity())
        throw std::invalid_argument("med: children disagree on arity");
    int n = left->arity();
    std::vector<ExprPtr> cs{std::move(left), std::move(right)};
    return ExprPtr(new BasisExpr(NodeKind::med, 0, n, b, std::move(cs)));
}

static int common_arity(const char* what, const std::vector<ExprPtr>& cs) {
    if (cs.empty()) throw std::invalid_argument(std::string(what) + ": needs at least one child");
    for (const auto& c : cs)
        if (!c) throw std::invalid_argument(std::string(what) + ": null child");
    int n = cs.front()->arity();
    for (const auto& c : cs)
        if (c->arity() != n)
            throw std::invalid_argument(std::string(what) + ": children disagree on arity");
    return n;
}

ExprPtr BasisExpr::join(std::vector<ExprPtr> children) {
    int n = common_arity("join", children);
    return ExprPtr(new BasisExpr(NodeKind::join, 0, n, std::nullopt, std::move(children)));
}

ExprPtr BasisExpr::meet(std::vector<ExprPtr> children) {
    int n = common_arity("meet", children);
    return ExprPtr(new BasisExpr(NodeKind::meet, 0, n, std::nullopt, std::move(children)));
}

bool structurally_equal(const BasisExpr& a, const BasisExpr& b) {
    if (&a == &b) return true;
    if (a.kind() != b.kind() || a.arity() != b.arity()) return false;
    switch (a.kind()) {
    case NodeKind::proj:
        return a.proj_index() == b.proj_index();
    case NodeKind::chi:
    case NodeKind::med:
        if (!(a.param() == b.param())) return false;
        break;
    case NodeKind::join:
    case NodeKind::meet:
        break;
    }
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!structurally_equal(*a.children()[i], *b.children()[i])) return false;
    return true;
}

// --- evaluation -------------------------------------------------------------

double eval_node(const BasisExpr& e, std::span<const double> x, ChiImpl chi_impl) {
    switch (e.kind_) {
    case NodeKind::proj:
        return x[static_cast<std::size_t>(e.index_)];
    case NodeKind::chi:
        return chi_impl(e.param_->value(), eval_node(*e.children_[0], x, chi_impl));
    case NodeKind::med:
        return med_b(e.param_->value(),
                     eval_node(*e.children_[0], x, chi_impl),
                     eval_node(*e.children_[1], x, chi_impl));
    case NodeKind::join: {
        double m = 0.0;
        for (const auto& c : e.children_) {
            m = std::max(m, eval_node(*c, x, chi_impl));
            if (m == 1.0) break;
        }
        return m;
    }
    case NodeKind::meet: {
        double m = 1.0;
        if (e.eval_order_.empty()) {
            for (const auto& c : e.children_) {
                m = std::min(m, eval_node(*c, x, chi_impl));
                if (m == 0.0) break;
            }
        } else {
            for (std::uint32_t i : e.eval_order_) {
                m = std::min(m, eval_node(*e.children_[i], x, chi_impl));
                if (m == 0.0) break;
            }
        }
        return m;
    }
    }
    throw std::logic_error("evaluate: unreachable node kind");
}

namespace {

void check_arity(const BasisExpr& e, std::size_t n) {
    if (static_cast<std::size_t>(e.arity()) != n)
        throw std::invalid_argument("evaluate: arity mismatch (expression wants " +
                                    std::to_string(e.arity()) + ", got " +
                                    std::to_string(n) + " coordinates)");
}

} // namespace

double evaluate(const BasisExpr& e, std::span<const double> x) {
    check_arity(e, x.size());
    return eval_node(e, x, &chi);
}

UnitValue evaluate(const BasisExpr& e, const InputVector& x) {
    return UnitValue(evaluate(e, x.coords()));
}

double evaluate_with_chi(const BasisExpr& e, std::span<const double> x, ChiImpl chi_impl) {
    check_arity(e, x.size());
    return eval_node(e, x, chi_impl);
}

// --- composition -------------------------------------------------------------

ExprPtr compose(const ExprPtr& f, const std::vector<ExprPtr>& gs) {
    if (!f) throw std::invalid_argument("compose: null expression");
    if (gs.empty()) throw std::invalid_argument("compose: empty substitution list");
    if (static_cast<std::size_t>(f->arity()) != gs.size())
        throw std::invalid_argument("compose: outer arity does not match substitution count");
    int n = common_arity("compose", gs);

    std::unordered_map<const BasisExpr*, ExprPtr> memo;
    auto subst = [&](auto&& self, const ExprPtr& e) -> ExprPtr {
        auto it = memo.find(e.get());
        if (it != memo.end()) return it->second;
        ExprPtr out;
        switch (e->kind()) {
        case NodeKind::proj:
            out = gs[static_cast<std::size_t>(e->proj_index())];
            break;
        case NodeKind::chi:
            out = BasisExpr::chi(e->param(), self(self, e->children()[0]));
            break;
        case NodeKind::med:
            out = BasisExpr::med(e->param(), self(self, e->children()[0]),
                                 self(self, e->children()[1]));
            break;
        case NodeKind::join:
        case NodeKind::meet: {
            std::vector<ExprPtr> cs;
            cs.reserve(e->children().size());
            for (const auto& c : e->children()) cs.push_back(self(self, c));
            out = e->kind() == NodeKind::join ? BasisExpr::join(std::move(cs))
                                              : BasisExpr::meet(std::move(cs));
            break;
        }
        }
        memo.emplace(e.get(), out);
        return out;
    };
    ExprPtr r = subst(subst, f);
    (void)n;
    return r;
}

// --- AggFunction -------------------------------------------------------------

AggFunction::AggFunction(std::string name, int arity, Evaluator eval, Provenance prov)
    : name_(std::move(name)), arity_(arity), eval_(std::move(eval)), prov_(prov) {
    if (arity_ < 1) throw std::invalid_argument("AggFunction: arity must be >= 1");
    if (!eval_) throw std::invalid_argument("AggFunction: missing evaluator");
}

double AggFunction::operator()(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(arity_))
        throw std::invalid_argument("AggFunction '" + name_ + "': arity mismatch");
    return eval_(x);
}

AggFunction AggFunction::from_expr(std::string name, ExprPtr e) {
    if (!e) throw std::invalid_argument("from_expr: null expression");
    int n = e->arity();
    return AggFunction(std::move(name), n,
                       [e = std::move(e)](std::span<const double> x) { return evaluate(*e, x); },
                       Provenance::compiled);
}

AggFunction AggFunction::from_table(std::string name, int arity, int k,
                                    std::vector<double> values) {
    if (arity < 1) throw std::invalid_argument("from_table: arity must be >= 1");
    if (k < 1) throw std::invalid_argument("from_table: k must be >= 1");
    std::size_t expected = 1;
    for (int i = 0; i < arity; ++i) expected *= static_cast<std::size_t>(k + 1);
    if (values.size() != expected)
        throw std::invalid_argument("from_table: need (k+1)^n values");
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("from_table: value out of [0,1]");

    auto eval = [arity, k, values = std::move(values)](std::span<const double> x) {
        bool top = true;
        for (double c : x) top = top && c == 1.0;
        if (top) return 1.0;
        // max over grid points a <= x, corners excluded
        std::vector<int> idx(static_cast<std::size_t>(arity), 0);
        double best = 0.0;
        for (;;) {
            bool zeros = true, ones = true, below = true;
            std::size_t flat = 0;
            for (int i = 0; i < arity; ++i) {
                int ii = idx[static_cast<std::size_t>(i)];
                zeros = zeros && ii == 0;
                ones = ones && ii == k;
                below = below && static_cast<double>(ii) / static_cast<double>(k) <=
                                     x[static_cast<std::size_t>(i)];
                flat = flat * static_cast<std::size_t>(k + 1) + static_cast<std::size_t>(ii);
            }
            if (!zeros && !ones && below) best = std::max(best, values[flat]);
            int d = arity - 1;
            while (d >= 0 && idx[static_cast<std::size_t>(d)] == k) {
                idx[static_cast<std::size_t>(d)] = 0;
                --d;
            }
            if (d < 0) break;
            ++idx[static_cast<std::size_t>(d)];
        }
        return best;
    };
    return AggFunction(std::move(name), arity, std::move(eval), Provenance::sampled);
}

} // namespace agg
