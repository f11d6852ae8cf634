#pragma once

#include <memory>

#include "sfmin/term_bicardinality.hpp"
#include "sfmin/term_cardinality.hpp"
#include "sfmin/term_general.hpp"
#include "sfmin/term_pairwise.hpp"

namespace sfmin {

inline std::unique_ptr<TermState> make_term_state(const Term& term) {
  switch (term.kind) {
    case TermKind::kPairwise:
      return std::make_unique<PairwiseTermState>(term);
    case TermKind::kCardinality:
      return std::make_unique<CardinalityTermState>(term);
    case TermKind::kBicardinality:
      return std::make_unique<BicardinalityTermState>(term);
    case TermKind::kGeneral:
      return std::make_unique<GeneralTermState>(term);
  }
  throw InstanceError("unknown term kind");
}

}  // namespace sfmin
