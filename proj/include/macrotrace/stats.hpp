#pragma once

namespace macrotrace::stats {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
// Accurate to well under 1e-10 over the parameter ranges used here.
double incomplete_beta(double a, double b, double x);

// Two-sided tail probability P(|T_dof| >= t).
double student_t_two_sided_p(double t, double dof);

// Inverse CDF of Student's t: smallest q with P(T_dof <= q) = prob.
double student_t_quantile(double prob, double dof);

}  // namespace macrotrace::stats
