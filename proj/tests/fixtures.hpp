#pragma once

// Regression values frozen from the first exact run. Fixture family:
// psi = min(q^(-1/2) on the 2^-32 grid, 1/2), y = (1/3, 2/3), delta = 1/2.

#include "khinlab/psi.hpp"
#include "khinlab/rational.hpp"
#include "khinlab/target.hpp"

#include <array>

namespace khinlab::fixture {

inline PsiFunction psi() { return normalize(power_psi(1, Rational(1, 2), kDefaultPsiGrid), 1); }
inline const RationalPair& y() {
  static const RationalPair value{Rational(1, 3), Rational(2, 3)};
  return value;
}
inline Rational delta() { return Rational(1, 2); }
inline Target target() { return Target(y(), delta()); }

inline const char* const kRatio25 =
    "820570974277744771095775121436046070446322552047303179968860486800670881/"
    "868205462217182296284755950424654828146097488489460292599419998224515072";
inline const char* const kRatio50 =
    "32404124184969993429940150469769824380537088554069986027478050427744641880443211660311556629680447476621309007241/"
    "34024850010478149039164299962069000054109717626354223848542764306589065669913676681854432053245140997865750921216";
inline const char* const kRatio100 =
    "490833449082826692260882384419336236872715020041846582603031394176329820446652940436337354574052060452086564710216718630571229942138378131067982779151469659124311415133854179433826931481/"
    "512828147438242396648043747614113628421657295425791736540023230407917116028958955618287930265116833294574643673802910931181376998563346962380736364584254969206557888643636564748381716480";

// Max of overlap_ratio over 1 <= r < q <= 100, attained at (77, 11).
inline const char* const kOverlapMax =
    "4333785668947951910843261426765660160/253186283845094428597022154136453789";

// tail_hit_fraction over [100, 10^4], N = 1000, seed = 7.
inline const char* const kTailTilde = "499/500";
inline const char* const kTailFull = "499/500";

// dyadic_hit_profile, N = 1000, seed = 7, k = 0..13.
inline const std::array<const char*, 14> kProfileTilde{
    "1/1",     "441/500", "933/1000", "9/10",     "901/1000", "223/250",  "893/1000",
    "181/200", "881/1000", "443/500", "449/500", "447/500", "913/1000", "889/1000"};
inline const std::array<const char*, 14> kProfileFull{
    "1/1",      "1/1",     "1/1",   "941/1000", "231/250", "23/25",   "91/100",
    "919/1000", "907/1000", "181/200", "91/100", "903/1000", "923/1000", "227/250"};

}  // namespace khinlab::fixture
