#pragma once

#include <stdexcept>
#include <string>

namespace sne {

/// Base of every error raised by the library. The CLI maps the subclasses
/// onto its exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration or invocation (unknown channel, missing corpus size, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data that violates a contract: malformed JSON lines, duplicate ids,
/// gold edges naming unknown actors.
class DataError : public Error {
public:
    using Error::Error;
};

/// A query whose term tokenizes to nothing.
class InvalidQueryError : public DataError {
public:
    using DataError::DataError;
};

/// A URL that is not absolute.
class UrlParseError : public DataError {
public:
    explicit UrlParseError(std::string url)
        : DataError("not an absolute URL: '" + url + "'"), url_(std::move(url)) {}

    const std::string& url() const noexcept { return url_; }

private:
    std::string url_;
};

/// Backend transport failure. Retriable; carries the query text.
class BackendError : public Error {
public:
    BackendError(std::string query, const std::string& what)
        : Error("backend failure for query [" + query + "]: " + what), query_(std::move(query)) {}

    const std::string& query() const noexcept { return query_; }

private:
    std::string query_;
};

/// Backend answered, but the response could not be understood.
class BackendParseError : public BackendError {
public:
    using BackendError::BackendError;
};

}  // namespace sne
