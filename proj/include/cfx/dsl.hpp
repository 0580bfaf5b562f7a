#pragma once

// Concrete syntax for rule classifiers and constraint sets.
//
//   program := { rule } default ;
//   rule    := "label" label "if" cond { "and" cond } "." ;
//   default := "default" label "." ;
//   deny    := "deny" ":" cond { "and" cond } "." ;
//   imply   := "rule" ":" cond { "and" cond } "->" IDENT "=" literal "." ;
//   group   := "group" ":" IDENT { "," IDENT } "." ;
//   cond    := IDENT op literal ;   op := = | != | < | <= | > | >=
//
// "#" at the start of a token comments out the rest of the line; inside a
// word it is an ordinary character, so encoded names like "ERE#1" lex as
// one identifier. Literals that are not plain words go in double quotes.

#include "cfx/classifiers.hpp"
#include "cfx/constraints.hpp"

#include <string>
#include <string_view>

namespace cfx {

RuleProgram parse_rule_program(std::string_view text, const FeatureSchema& schema);
ConstraintSet parse_constraints(std::string_view text, const FeatureSchema& schema);

std::string print_rule_program(const RuleProgram& program, const FeatureSchema& schema);
std::string print_constraints(const ConstraintSet& cs, const FeatureSchema& schema);

/// A value as it must be written in the DSL: bare when it is a plain word,
/// quoted otherwise.
std::string dsl_literal(std::string_view value);

} // namespace cfx
