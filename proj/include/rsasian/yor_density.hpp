#pragma once

#include "rsasian/theta.hpp"

namespace rsasian::yor {

/// log of Yor's conditional density f(t, z, w) of A_t = int_0^t e^{2(B_u + nu u)} du
/// given B_t + nu t = z (drift-free):
///   f(t,z,w) = sqrt(2 pi t) e^{z^2/(2t)} (1/w) e^{-(1+e^{2z})/(2w)} theta_{e^z/w}(t).
double log_f_cond(double t, double z, double w, const ThetaOptions& opt = {});
double f_cond(double t, double z, double w, const ThetaOptions& opt = {});

/// Table-backed variant; the table fixes t and must cover r = e^z / w.
double log_f_cond(const ThetaTable& table, double z, double w);

}  // namespace rsasian::yor
