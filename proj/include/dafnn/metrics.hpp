#pragma once

#include <vector>

namespace dafnn {

// RMSE = sqrt((1/N) sum (m_i - o_i)^2)
double rmse(const std::vector<double>& model, const std::vector<double>& obs);

// R^2 = 1 - sum (o_i - m_i)^2 / sum (o_i - mean(o))^2; may be negative.
double r_squared(const std::vector<double>& model, const std::vector<double>& obs);

// Order-invariant sample median (sorts a copy; even sizes average the middle pair).
double median(std::vector<double> values);

} // namespace dafnn
