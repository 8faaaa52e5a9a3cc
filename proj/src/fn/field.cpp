#include "sobex/fn/field.hpp"

namespace sobex::fn {

namespace {
double fd_rec(const AnalyticField& u, Pt x, MultiIdx alpha, int comp, double h) {
  int axis = -1;
  for (int i = 0; i < 3; ++i)
    if (alpha.a[i] > 0) axis = i;
  if (axis < 0) return u.value(x, comp);
  MultiIdx lower = alpha;
  lower.a[axis] -= 1;
  Pt xp = x, xm = x;
  xp[axis] += h;
  xm[axis] -= h;
  return (fd_rec(u, xp, lower, comp, h) - fd_rec(u, xm, lower, comp, h)) / (2 * h);
}
}  // namespace

double fd_derivative(const AnalyticField& u, const Pt& x, const MultiIdx& alpha, int comp, double h) {
  return fd_rec(u, x, alpha, comp, h);
}

double field_derivative(const AnalyticField& u, const Pt& x, const MultiIdx& alpha, int comp, double h_fd,
                        bool* used_fd) {
  if (alpha.order() == 0) return u.value(x, comp);
  if (u.deriv && alpha.order() <= u.deriv_order) return u.deriv(x, alpha, comp);
  if (used_fd) *used_fd = true;
  return fd_rec(u, x, alpha, comp, h_fd);
}

}  // namespace sobex::fn
