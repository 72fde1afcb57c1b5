// repro.hpp — the bundled verification suite behind `mucheck paper-repro`.
//
// Each check pins one headline property of the library at desk scale,
// exhaustively where the stated bounds allow it: three-valued consistency,
// agreement with the two-valued semantics on Kripke structures, soundness of
// mixed simulation, maximality of the computed simulation, the bounded
// separation of GTSs from KMTSs, contextual equality of the
// hypertransition split, the thorough-versus-inductive gap, the approximant
// witness property, minimal-model growth and the steps collapse contract.
//
// Checks read their models from the fixtures directory, so a mutated
// fixture shows up as a failing check, not a crash.

#pragma once

#include <string>
#include <vector>

namespace mucheck {

struct ReproCheck {
  std::string name;
  std::string expected;
  std::string observed;
  bool pass = false;
};

struct ReproOptions {
  std::string fixtures_dir = "fixtures";
  std::string only;  // run a single named check when nonempty
};

const std::vector<std::string>& repro_check_names();

// Closed formulas over proposition `a` covering every grammar production and
// both fixpoints; shared by the consistency, agreement, soundness and
// approximant checks (and the unit tests).
const std::vector<std::string>& corpus_formulas();

std::vector<ReproCheck> paper_repro(const ReproOptions& opts);

}  // namespace mucheck
