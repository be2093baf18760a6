#ifndef FM_TESTS_FIXTURE_HPP
#define FM_TESTS_FIXTURE_HPP

#include <string>

#include "fm/parse.hpp"

namespace fm::testing {

inline const std::string fixture_text = R"(feature A or {
  feature B or { feature E feature F feature G }
  feature C or { feature H feature I }
  feature D or { feature J feature K feature L }
}
constraints {
  E implies H
  G implies H
  J implies I
}
)";

inline FeatureTree fixture() { return parse_model(fixture_text); }

} // namespace fm::testing

#endif // FM_TESTS_FIXTURE_HPP
