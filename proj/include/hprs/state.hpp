#ifndef HPRS_STATE_HPP
#define HPRS_STATE_HPP

#include <map>
#include <string>

namespace hprs {

// One observed state: named real-valued variables.
using StateSample = std::map<std::string, double>;

// Looks up `name`, throwing Error{UnknownVariable} when absent.
double state_value(const StateSample& s, const std::string& name);

}  // namespace hprs

#endif  // HPRS_STATE_HPP
