#include "iasdo/condition.hpp"

#include <algorithm>

namespace iasdo {

namespace {

void collect_atoms(const Condition& ast, std::set<std::string>& out) {
    switch (ast.kind()) {
        case Condition::Kind::Atom:
            out.insert(ast.class_name());
            return;
        case Condition::Kind::SameAncestor:
            out.insert(ast.names()[0]);
            out.insert(ast.names()[1]);
            return;
        default:
            for (const auto& child : ast.children()) collect_atoms(child, out);
    }
}

const Binding& lookup(const BindingSet& bindings, const std::string& key) {
    auto it = bindings.find(key);
    if (it == bindings.end()) throw ConditionError("condition references unknown binding '" + key + "'");
    return it->second;
}

}  // namespace

Condition::Condition(Kind kind, std::vector<std::string> names, std::vector<Condition> children)
    : kind_(kind), names_(std::move(names)), children_(std::move(children)) {}

const std::string& Condition::class_name() const {
    static const std::string empty;
    return kind_ == Kind::Atom ? names_.front() : empty;
}

Condition Condition::atom(std::string class_name) { return Condition(Kind::Atom, {std::move(class_name)}, {}); }

Condition Condition::all_of(std::vector<Condition> children) { return make(Kind::And, std::move(children)); }

Condition Condition::any_of(std::vector<Condition> children) { return make(Kind::Or, std::move(children)); }

Condition Condition::one_of(std::vector<Condition> children) { return make(Kind::Xor, std::move(children)); }

Condition Condition::negate(Condition child) {
    std::vector<Condition> children;
    children.push_back(std::move(child));
    return make(Kind::Not, std::move(children));
}

Condition Condition::same_ancestor(std::string first, std::string second, std::string ancestor) {
    return Condition(Kind::SameAncestor, {std::move(first), std::move(second), std::move(ancestor)}, {});
}

Condition Condition::make(Kind kind, std::vector<Condition> children) {
    switch (kind) {
        case Kind::And:
        case Kind::Or:
        case Kind::Xor:
            if (children.size() < 2) throw std::invalid_argument("and/or/xor need at least two operands");
            break;
        case Kind::Not:
            if (children.size() != 1) throw std::invalid_argument("not takes exactly one operand");
            break;
        case Kind::Atom:
        case Kind::SameAncestor:
            throw std::invalid_argument("leaf conditions are built with atom()/same_ancestor()");
    }
    return Condition(kind, {}, std::move(children));
}

bool eval_condition(const Condition& ast, const BindingSet& bindings, const AncestorResolver& resolver) {
    switch (ast.kind()) {
        case Condition::Kind::Atom: {
            const Binding& b = lookup(bindings, ast.class_name());
            return b.object.has_value() && b.active;
        }
        case Condition::Kind::SameAncestor: {
            const Binding& first = lookup(bindings, ast.names()[0]);
            const Binding& second = lookup(bindings, ast.names()[1]);
            if (!resolver) throw ConditionError("same_ancestor needs a world to be evaluated against");
            if (!first.object || !second.object) return false;
            return resolver(*first.object, *second.object, ast.names()[2]);
        }
        case Condition::Kind::Not:
            return !eval_condition(ast.children().front(), bindings, resolver);
        case Condition::Kind::And:
            // Every child is evaluated so unknown bindings surface regardless of order.
            return std::ranges::count_if(ast.children(), [&](const Condition& c) {
                       return eval_condition(c, bindings, resolver);
                   }) == static_cast<std::ptrdiff_t>(ast.children().size());
        case Condition::Kind::Or:
            return std::ranges::count_if(ast.children(), [&](const Condition& c) {
                       return eval_condition(c, bindings, resolver);
                   }) > 0;
        case Condition::Kind::Xor:
            return std::ranges::count_if(ast.children(), [&](const Condition& c) {
                       return eval_condition(c, bindings, resolver);
                   }) == 1;
    }
    return false;
}

std::set<std::string> atoms_of(const Condition& ast) {
    std::set<std::string> out;
    collect_atoms(ast, out);
    return out;
}

bool uses_negation(const Condition& ast) {
    if (ast.kind() == Condition::Kind::Not) return true;
    return std::ranges::any_of(ast.children(), [](const Condition& c) { return uses_negation(c); });
}

bool uses_same_ancestor(const Condition& ast) {
    if (ast.kind() == Condition::Kind::SameAncestor) return true;
    return std::ranges::any_of(ast.children(), [](const Condition& c) { return uses_same_ancestor(c); });
}

}  // namespace iasdo
