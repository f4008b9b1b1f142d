#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "iasdo/object_id.hpp"

namespace iasdo {

// Condition over class memberships, used for process pre/post conditions and
// effect guards.
//
//   Atom(C)                  true iff the object bound to C is active in C
//   And / Or                 usual meaning, n-ary (>= 2 children)
//   Xor                      exactly one child true (not parity)
//   Not                      single child
//   SameAncestor(A, B, C)    guard-only: the objects bound to A and B reach a
//                            common object of class C through their ED links
class Condition {
public:
    enum class Kind { Atom, And, Or, Xor, Not, SameAncestor };

    static Condition atom(std::string class_name);
    static Condition all_of(std::vector<Condition> children);
    static Condition any_of(std::vector<Condition> children);
    static Condition one_of(std::vector<Condition> children);
    static Condition negate(Condition child);
    static Condition same_ancestor(std::string first, std::string second, std::string ancestor);
    // Throws std::invalid_argument when the arity does not fit the kind.
    static Condition make(Kind kind, std::vector<Condition> children);

    Kind kind() const { return kind_; }
    // Atom class name; empty for every other kind.
    const std::string& class_name() const;
    // SameAncestor arguments (first binding, second binding, ancestor class).
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<Condition>& children() const { return children_; }

    bool operator==(const Condition&) const = default;

private:
    Condition(Kind kind, std::vector<std::string> names, std::vector<Condition> children);

    Kind kind_ = Kind::Atom;
    std::vector<std::string> names_;
    std::vector<Condition> children_;
};

struct Binding {
    std::optional<ObjectId> object;
    bool active = false;  // bound object's membership in the keyed class is active

    bool operator==(const Binding&) const = default;
};

// Class name -> binding. Every atom of an evaluated condition must be a key.
using BindingSet = std::map<std::string, Binding>;

// Answers SameAncestor(first, second, ancestor_class) for two bound objects.
using AncestorResolver = std::function<bool(ObjectId, ObjectId, const std::string&)>;

class ConditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Throws ConditionError when an atom's class is not a key of `bindings`, or when a
// SameAncestor node is evaluated without a resolver.
bool eval_condition(const Condition& ast, const BindingSet& bindings, const AncestorResolver& resolver = {});

// Every binding key the condition reads: atom classes plus the two SameAncestor
// bindings (its ancestor class is not a binding and is left out).
std::set<std::string> atoms_of(const Condition& ast);

bool uses_negation(const Condition& ast);
bool uses_same_ancestor(const Condition& ast);

}  // namespace iasdo
