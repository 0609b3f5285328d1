#ifndef SUBWEYL_ERRORS_HPP
#define SUBWEYL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace subweyl {

// Base of all library errors. `name()` is the stable identifier surfaced by
// the CLI and asserted by tests; `what()` carries context.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define SUBWEYL_ERROR(Name)                                        \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    };

SUBWEYL_ERROR(OrderOutOfRange)
SUBWEYL_ERROR(DomainError)
SUBWEYL_ERROR(SyntaxError)
SUBWEYL_ERROR(UnknownSymbol)
SUBWEYL_ERROR(DegenerateMetric)
SUBWEYL_ERROR(DegenerateTransversalMetric)
SUBWEYL_ERROR(DegenerateFullMetric)
SUBWEYL_ERROR(NotPositiveDefinite)
SUBWEYL_ERROR(OnZeroSection)
SUBWEYL_ERROR(NotRiemannianBase)
SUBWEYL_ERROR(UnknownSuite)
SUBWEYL_ERROR(SuiteInapplicable)
SUBWEYL_ERROR(EmptyDomain)
SUBWEYL_ERROR(ParseError)
SUBWEYL_ERROR(ValidationError)

#undef SUBWEYL_ERROR

} // namespace subweyl

#endif
