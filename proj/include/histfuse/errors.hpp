#ifndef HISTFUSE_ERRORS_HPP
#define HISTFUSE_ERRORS_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace histfuse {

// Domain failure with a stable machine-readable code ("NotPD", "DimMismatch",
// ...) and optional key/value context. The CLI maps these to exit code 1.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    DomainError&& with(const std::string& key, std::string value) && {
        context_.emplace(key, std::move(value));
        return std::move(*this);
    }

    const std::string& code() const noexcept { return code_; }
    const std::map<std::string, std::string>& context() const noexcept { return context_; }

private:
    std::string code_;
    std::map<std::string, std::string> context_;
};

}  // namespace histfuse

#endif
