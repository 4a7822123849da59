#include "glap/quadrature.hpp"

#include <sstream>

namespace glap::quad {

void throw_nonconvergent(std::string_view what, double a, double b, double value, double error) {
    std::ostringstream os;
    os.precision(6);
    os << what << ": quadrature on [" << a << ", " << b << "] did not converge (value " << value
       << ", error estimate " << error << ")";
    throw NumericError(os.str());
}

}  // namespace glap::quad
