/*
 * Copyright (c) 2026 The plannego Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "plannego/evaluator.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace plannego {

std::string_view to_string(FeasibilityFailure kind) {
    return kind == FeasibilityFailure::Applicability ? "applicability" : "precondition-unsatisfiable";
}

std::string_view to_string(CheckKind kind) {
    switch (kind) {
    case CheckKind::WellFormed: return "well-formed";
    case CheckKind::Feasible: return "feasible";
    case CheckKind::Optimal: return "optimal";
    case CheckKind::BeliefSupport: return "belief-support";
    }
    return "?";
}

std::string_view verdict_tag(const Verdict& verdict) {
    struct Tag {
        std::string_view operator()(const Accept&) const { return "Accept"; }
        std::string_view operator()(const IllFormed&) const { return "IllFormed"; }
        std::string_view operator()(const Infeasible&) const { return "Infeasible"; }
        std::string_view operator()(const SuboptimalParameter&) const { return "SuboptimalParameter"; }
        std::string_view operator()(const SuboptimalAction&) const { return "SuboptimalAction"; }
        std::string_view operator()(const BeliefConflict&) const { return "BeliefConflict"; }
    };
    return std::visit(Tag{}, verdict);
}

namespace {

Recipe renamed(const Recipe& recipe, const std::string& suffix) {
    Recipe r = recipe;
    r.action = rename_variables(recipe.action, suffix);
    auto lit = [&](std::vector<Literal>& items) {
        for (auto& l : items) l.atom = rename_variables(l.atom, suffix);
    };
    lit(r.applicability);
    lit(r.preconditions);
    lit(r.constraints);
    for (auto& t : r.body) t = rename_variables(t, suffix);
    for (auto& t : r.effects) t = rename_variables(t, suffix);
    if (r.goal) r.goal = rename_variables(*r.goal, suffix);
    return r;
}

std::string suffix_for(const Recipe& recipe) {
    return "r:" + recipe.name;
}

Literal recipe_missing(const Term& action) {
    return Literal{Term::compound("has-recipe", {action}), true};
}

/// Instantiates the failed constraint with the first solution of the
/// constraints before it, so the reason is as ground as possible.
Literal instantiate_failure(const Recipe& recipe, std::size_t failed_at, const Substitution& bindings,
                            const Library& library) {
    std::span<const Literal> prefix(recipe.constraints.data(), failed_at);
    auto solutions = solve(prefix, bindings, library);
    const Substitution& s = solutions.empty() ? bindings : solutions.front();
    return negate(substitute(recipe.constraints[failed_at], s));
}

bool achievable(const Literal& condition, const Library& library, int depth) {
    for (const Recipe* achiever : achievers(condition, library)) {
        Recipe r = renamed(*achiever, "ach:" + achiever->name + ":" + std::to_string(depth));
        for (const auto& effect : r.effects) {
            Substitution s;
            if (!unify(effect, condition.atom, s)) continue;
            auto ok = solve(r.applicability, s, library);
            if (ok.empty()) continue;
            if (depth <= 1) return true;
            bool all = true;
            for (const auto& pre : r.preconditions) {
                if (holds(pre, ok.front(), library).empty() &&
                    !achievable(substitute(pre, ok.front()), library, depth - 1)) {
                    all = false;
                    break;
                }
            }
            if (all) return true;
        }
    }
    return false;
}

}  // namespace

WellFormedResult well_formed(const ActionNode* parent, const ActionNode& child, const Library& library) {
    WellFormedResult result;
    if (!parent) {
        result.passed = true;
        return result;
    }
    auto recipes = library.recipes_for(parent->action.name);
    if (recipes.empty()) {
        result.reason = recipe_missing(parent->action);
        result.structural = true;
        return result;
    }
    std::optional<Literal> constraint_failure;
    for (const Recipe* original : recipes) {
        std::string suffix = suffix_for(*original);
        Recipe recipe = renamed(*original, suffix);
        Substitution header;
        if (!unify(recipe.action, parent->action, header)) continue;
        for (std::size_t i = 0; i < recipe.body.size(); ++i) {
            const Term& step = recipe.body[i];
            if (step.name != child.action.name || step.arity() != child.action.arity()) continue;
            Substitution bound = header;
            if (!unify(step, child.action, bound)) continue;
            std::size_t failed_at = 0;
            if (!solve(recipe.constraints, bound, library, &failed_at).empty()) {
                result.passed = true;
                result.contribution = Contribution{original, suffix, i, header, bound};
                return result;
            }
            if (!constraint_failure) {
                constraint_failure = instantiate_failure(recipe, failed_at, bound, library);
            }
        }
    }
    if (constraint_failure) {
        result.reason = *constraint_failure;
    } else {
        result.reason = Literal{Term::compound("contributes", {child.action, parent->action}), true};
        result.structural = true;
    }
    return result;
}

std::vector<Literal> satisfied_constraints(const Contribution& contribution, const Library& library) {
    Recipe recipe = renamed(*contribution.recipe, contribution.suffix);
    auto solutions = solve(recipe.constraints, contribution.bindings, library);
    std::vector<Literal> out;
    if (solutions.empty()) return out;
    for (const auto& c : recipe.constraints) out.push_back(substitute(c, solutions.front()));
    return out;
}

FeasibilityResult feasible(const ActionNode& node, const Library& library, int precondition_depth) {
    FeasibilityResult result;
    std::optional<FeasibilityResult> first_failure;
    bool any_header = false;
    for (const Recipe* original : library.recipes_for(node.action.name)) {
        Recipe recipe = renamed(*original, suffix_for(*original));
        Substitution header;
        if (!unify(recipe.action, node.action, header)) continue;
        any_header = true;
        std::size_t failed_at = 0;
        auto applicable = solve(recipe.applicability, header, library, &failed_at);
        if (applicable.empty()) {
            if (!first_failure) {
                std::span<const Literal> prefix(recipe.applicability.data(), failed_at);
                auto sols = solve(prefix, header, library);
                const Substitution& s = sols.empty() ? header : sols.front();
                first_failure = FeasibilityResult{false, negate(substitute(recipe.applicability[failed_at], s)),
                                                  FeasibilityFailure::Applicability};
            }
            continue;
        }
        const Substitution& bindings = applicable.front();
        std::optional<Literal> unsatisfiable;
        for (const auto& pre : recipe.preconditions) {
            if (!holds(pre, bindings, library).empty()) continue;
            Literal grounded = substitute(pre, bindings);
            if (!achievable(grounded, library, precondition_depth)) {
                unsatisfiable = grounded;
                break;
            }
        }
        if (!unsatisfiable) {
            result.passed = true;
            return result;
        }
        if (!first_failure) {
            first_failure = FeasibilityResult{false, negate(*unsatisfiable),
                                              FeasibilityFailure::PreconditionUnsatisfiable};
        }
    }
    if (!any_header) {
        return FeasibilityResult{false, recipe_missing(node.action), FeasibilityFailure::Applicability};
    }
    return *first_failure;
}

SupportResult belief_supported(const BeliefNode& from, const BeliefNode& to, const Library& library) {
    if (from.kind != BeliefKind::MB || to.kind != BeliefKind::MB) {
        return {false, "supports edges relate mutual beliefs only"};
    }
    for (std::size_t i = 0; i < library.support_rules().size(); ++i) {
        const SupportRule& rule = library.support_rules()[i];
        std::string suffix = "s" + std::to_string(i);
        Substitution s;
        if (unify(rename_variables(rule.antecedent, suffix), from.proposition, s) &&
            unify(rename_variables(rule.consequent, suffix), to.proposition, s)) {
            return {true, {}};
        }
    }
    return {false, "no support rule relates " + to_string(from.proposition) + " to " +
                       to_string(to.proposition)};
}

std::vector<ParameterRanking> rank_parameters(const ActionNode& parent, const ActionNode& child,
                                              const Library& library, const UserModel& user,
                                              const StrengthScale& scale) {
    std::vector<ParameterRanking> out;
    WellFormedResult wf = well_formed(&parent, child, library);
    if (!wf.passed || !wf.contribution) return out;
    const Contribution& c = *wf.contribution;
    Recipe recipe = renamed(*c.recipe, c.suffix);
    auto header_vars = variables_of(recipe.action);
    const Term& step = recipe.body[c.body_index];
    for (std::size_t i = 0; i < step.arity(); ++i) {
        const Term& slot = step.args[i];
        if (!slot.is_variable() || header_vars.count(slot.name)) continue;
        Substitution partial = c.header_bindings;
        bool consistent = true;
        for (std::size_t j = 0; j < step.arity() && consistent; ++j) {
            if (j != i) consistent = unify(step.args[j], child.action.args[j], partial);
        }
        if (!consistent) continue;
        ParameterRanking pr;
        pr.parameter = c.recipe->body[c.body_index].args[i].name;
        pr.position = i;
        pr.candidates = candidates(recipe, slot.name, partial, library);
        if (pr.candidates.empty()) continue;
        pr.ranking = rank(pr.candidates, child.action.name, user.preferences, library, scale);
        out.push_back(std::move(pr));
    }
    return out;
}

namespace {

bool has_applicable_preference(const UserModel& user, std::string_view action) {
    return std::any_of(user.preferences.begin(), user.preferences.end(),
                       [&](const Preference& p) { return p.applies_to(action); });
}

const CandidateScore* find_score(const std::vector<CandidateScore>& ranking, const Term& candidate) {
    auto it = std::find_if(ranking.begin(), ranking.end(),
                           [&](const CandidateScore& s) { return s.candidate == candidate; });
    return it == ranking.end() ? nullptr : &*it;
}

std::optional<Verdict> check_action_alternatives(const ActionNode& parent, const ActionNode& child,
                                                 const std::string& current_recipe,
                                                 const CandidateScore& current, const Library& library,
                                                 const UserModel& user, const EvaluationOptions& options) {
    for (const Recipe* original : library.recipes_for(parent.action.name)) {
        if (original->name == current_recipe) continue;
        Recipe recipe = renamed(*original, suffix_for(*original));
        Substitution header;
        if (!unify(recipe.action, parent.action, header)) continue;
        auto header_vars = variables_of(recipe.action);
        for (const auto& step : recipe.body) {
            for (const auto& slot : step.args) {
                if (!slot.is_variable() || header_vars.count(slot.name)) continue;
                auto found = candidates(recipe, slot.name, header, library);
                if (found.empty()) continue;
                auto ranking = rank(found, step.name, user.preferences, library, options.scale);
                const CandidateScore& champion = ranking.front();
                if (substantially_better(champion, current, options.threshold)) {
                    Substitution s = header;
                    s[slot.name] = champion.candidate;
                    return SuboptimalAction{child.id, child.action, current_recipe, original->name,
                                            substitute(step, s), {champion, current}};
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<Verdict> check_optimality(const ActionNode& parent, const ActionNode& child,
                                        const Library& library, const UserModel& user,
                                        const EvaluationOptions& options) {
    if (!has_applicable_preference(user, child.action.name)) return std::nullopt;
    WellFormedResult wf = well_formed(&parent, child, library);
    if (!wf.contribution) return std::nullopt;
    auto rankings = rank_parameters(parent, child, library, user, options.scale);
    for (const auto& pr : rankings) {
        if (options.waived_optimality.count({child.id, pr.position})) continue;
        const Term& current = child.action.args[pr.position];
        if (!current.is_ground()) continue;
        const CandidateScore* mine = find_score(pr.ranking, current);
        if (!mine) continue;
        if (!options.waived_optimality.count({child.id, kWholeAction})) {
            if (auto alt = check_action_alternatives(parent, child, wf.contribution->recipe->name, *mine,
                                                     library, user, options)) {
                return alt;
            }
        }
        if (pr.candidates.size() < 2) continue;
        const CandidateScore& best = pr.ranking.front();
        if (best.candidate != current && substantially_better(best, *mine, options.threshold)) {
            return SuboptimalParameter{child.id, child.action, pr.parameter, pr.position, current,
                                       best.candidate, pr.ranking};
        }
    }
    return std::nullopt;
}

void notify(const EvaluationOptions& options, NodeId node, std::optional<NodeId> parent, CheckKind check,
            bool passed) {
    if (options.observer) options.observer(CheckEvent{node, parent, check, passed});
}

}  // namespace

Verdict evaluate_supports(const DialogueModel& model, std::vector<SupportEdge> edges,
                          const Library& library, const EvaluationOptions& options) {
    // Depth of a belief: how many supports hops separate it from a belief
    // that supports nothing. Edges into shallower beliefs are checked first.
    std::map<NodeId, std::vector<NodeId>> out_edges;
    for (const auto& e : model.supports()) out_edges[e.from].push_back(e.to);
    std::map<NodeId, int> memo;
    std::function<int(NodeId, int)> depth = [&](NodeId n, int guard) -> int {
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        int d = 0;
        if (guard < 64) {
            for (NodeId m : out_edges[n]) d = std::max(d, 1 + depth(m, guard + 1));
        }
        return memo[n] = d;
    };
    std::stable_sort(edges.begin(), edges.end(), [&](const SupportEdge& a, const SupportEdge& b) {
        int da = depth(a.to, 0);
        int db = depth(b.to, 0);
        if (da != db) return da < db;
        return std::pair(a.to, a.from) < std::pair(b.to, b.from);
    });
    for (const auto& edge : edges) {
        const BeliefNode* from = model.find_belief(edge.from);
        const BeliefNode* to = model.find_belief(edge.to);
        if (!from || !to) continue;
        SupportResult r = belief_supported(*from, *to, library);
        notify(options, edge.to, edge.from, CheckKind::BeliefSupport, r.passed);
        if (!r.passed) {
            return BeliefConflict{edge, from->proposition, to->proposition, r.reason};
        }
    }
    return Accept{};
}

Verdict evaluate(const DialogueModel& model, const Library& library, const UserModel& user,
                 const EvaluationOptions& options) {
    // Discourse actions are being executed, not proposed; only the beliefs
    // they convey are evaluated.
    for (Level level : {Level::Domain, Level::ProblemSolving}) {
        const auto& store = model.level(level);
        std::deque<NodeId> queue;
        for (const auto& [id, node] : store) {
            if (node.status != Status::Proposed) continue;
            const ActionNode* parent = node.parent ? model.find_action(*node.parent) : nullptr;
            if (!parent || parent->status != Status::Proposed) queue.push_back(id);
        }
        while (!queue.empty()) {
            const ActionNode& node = store.at(queue.front());
            queue.pop_front();
            const ActionNode* parent = node.parent ? model.find_action(*node.parent) : nullptr;

            if (parent) {
                WellFormedResult wf = well_formed(parent, node, library);
                notify(options, node.id, parent->id, CheckKind::WellFormed, wf.passed);
                if (!wf.passed) {
                    return IllFormed{parent->id, node.id, parent->action, node.action, wf.reason, wf.structural};
                }
            }
            FeasibilityResult fr = feasible(node, library, options.precondition_depth);
            notify(options, node.id, node.parent, CheckKind::Feasible, fr.passed);
            if (!fr.passed) {
                return Infeasible{node.id, node.action, fr.reason, fr.kind};
            }
            if (parent) {
                auto sub = check_optimality(*parent, node, library, user, options);
                notify(options, node.id, parent->id, CheckKind::Optimal, !sub.has_value());
                if (sub) return *sub;
            }
            for (NodeId child : node.children) {
                if (store.at(child).status == Status::Proposed) queue.push_back(child);
            }
        }
    }
    return evaluate_supports(model, model.proposed_supports(), library, options);
}

}  // namespace plannego
