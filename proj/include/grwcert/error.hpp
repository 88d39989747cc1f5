#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grwcert {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text; `offset()` is the byte offset of the offending token.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset)
    {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifier : public Error {
public:
    explicit UnknownIdentifier(std::string name)
        : Error("unknown identifier '" + name + "'"), name_(std::move(name))
    {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Evaluation left a function's domain; `node()` is the source text of the offending subexpression.
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::string node)
        : Error(what + " in '" + node + "'"), node_(std::move(node))
    {}
    const std::string& node() const { return node_; }

private:
    std::string node_;
};

class ChartError : public Error {
public:
    using Error::Error;
};

class SamplingExhausted : public Error {
public:
    using Error::Error;
};

class NotDifferentiable : public Error {
public:
    using Error::Error;
};

class NotClosed : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Input document does not match the expected schema; `field()` names the JSON path.
class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::string field)
        : Error(what + " (field '" + field + "')"), field_(std::move(field))
    {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class UnknownCatalogEntry : public Error {
public:
    explicit UnknownCatalogEntry(const std::string& name) : Error("no catalog entry named '" + name + "'") {}
};

}  // namespace grwcert
