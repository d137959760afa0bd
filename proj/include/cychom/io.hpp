#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "cychom/hkr.hpp"

namespace cychom {

using Json = nlohmann::ordered_json;

/// Parsed and validated problem description. Validation errors carry JSON
/// paths; resource guards fail fast with the predicted chain-group dimension.
struct ProblemSpec {
    FiniteGroup group = FiniteGroup::trivial();
    std::optional<Algebra> algebra;        // explicit structure constants
    std::optional<GroupAction> action;
    std::optional<PolyAlgebra> poly;       // polynomial input instead
    std::optional<LinearAction> linear;
    std::string phi = "all-classes";
    std::size_t truncation = 4;

    struct Euler {
        FiniteGroup quotient = FiniteGroup::trivial();
        EulerCocycleData data;
    };
    std::optional<Euler> euler;

    const Algebra& coeff_algebra() const;
    const GroupAction& coeff_action() const;
    std::vector<std::size_t> phi_indices() const;  // resolved classes to run
};

ProblemSpec load_problem(const Json& j);
ProblemSpec load_problem_file(const std::string& path);

Json homology_to_json(const HomologyTable& t, const GradedModule* spaces = nullptr);
std::string homology_to_csv(const HomologyTable& t, const GradedModule* spaces = nullptr);
Json ss_to_json(const SpectralSequence& ss);
std::string ss_to_csv(const SpectralSequence& ss);
Json report_to_json(const PipelineReport& rep, const FiniteGroup& g);
Json varieties_to_json(const std::vector<VarietiesReport>& reps, const FiniteGroup& g);
Json hp_to_json(const HpEstimate hp[2]);

/// Debug serializer for operator matrices.
Json matrix_to_json(const SparseMatrix& m);

/// Atomic write: temp file in the target directory, then rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace cychom
