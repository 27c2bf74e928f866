// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mgv {

// Base class for every error this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// gateway
class ValidationError : public Error { public: using Error::Error; };
class TransportError : public Error { public: using Error::Error; };
class ProtocolError : public Error { public: using Error::Error; };
class AuthError : public Error { public: using Error::Error; };
class ScriptExhausted : public Error { public: using Error::Error; };
class MatcherMismatch : public Error { public: using Error::Error; };

// prompts
class MissingField : public Error { public: using Error::Error; };
class InvalidKind : public Error { public: using Error::Error; };

// parsing
class MonitorParseError : public Error { public: using Error::Error; };
class SolutionParseError : public Error { public: using Error::Error; };
class EvaluationParseError : public Error { public: using Error::Error; };
class NotANumber : public Error { public: using Error::Error; };

// controller / baselines
class NoAnswer : public Error { public: using Error::Error; };
class NoConditions : public Error { public: using Error::Error; };
class RewriteError : public Error { public: using Error::Error; };

// harness
class SampleTooLarge : public Error { public: using Error::Error; };
class MalformedLine : public Error { public: using Error::Error; };
class MissingAnswerMarker : public Error { public: using Error::Error; };
class EmptyResults : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

} // namespace mgv
