#include <stdexcept>
#include <string>

#include "gifsdim/gifs.hpp"

namespace gifsdim {

namespace {

// Shared header: R x Q_2, T = t1 = (kappa, lambda), t2 = t1 + (1, 1).
constexpr const char* kHeader = R"json({
  "space": {"real": 1, "complex": 0, "primes": [2]},
  "constants": {
    "kappa": "(3-sqrt(17))/2",
    "lambda": {"value": "(3+sqrt(17))/2", "selectors": {"2": 0}},
    "T": ["kappa", "lambda"],
    "t1": ["kappa", "lambda"],
    "t2": "t1 + 1"
  },
)json";

constexpr const char* kMain = R"json(
  "vertices": ["a", "b"],
  "edges": [
    {"from": "a", "to": "a", "linear": "T", "translate": "0"},
    {"from": "a", "to": "b", "linear": "T", "translate": "0"},
    {"from": "a", "to": "a", "linear": "T", "translate": "1/2*t1"},
    {"from": "a", "to": "b", "linear": "T", "translate": "1/2*t1"},
    {"from": "a", "to": "a", "linear": "T", "translate": "t2"},
    {"from": "b", "to": "a", "linear": "T", "translate": "t1"}
  ]
})json";

// Xi(u, v, z) are the pairwise intersections of the main system's pieces,
// written out as their own graph-directed system.
constexpr const char* kBoundaryFull = R"json(
  "vertices": ["Xi(a,b,0)", "Xi(b,a,0)", "Xi(a,a,1)", "Xi(a,a,-1)",
               "Xi(a,a,lambda/2-1)", "Xi(a,a,1-lambda/2)", "Xi(a,b,1-lambda/2)", "Xi(b,a,lambda/2-1)"],
  "edges": [
    {"from": "Xi(a,b,0)", "to": "Xi(a,a,1)", "linear": "T", "translate": "0"},
    {"from": "Xi(b,a,0)", "to": "Xi(a,a,-1)", "linear": "T", "translate": "t1"},
    {"from": "Xi(a,a,1)", "to": "Xi(a,a,-1)", "linear": "T", "translate": "t1"},
    {"from": "Xi(a,a,1)", "to": "Xi(a,a,lambda/2-1)", "linear": "T", "translate": "0"},
    {"from": "Xi(a,a,1)", "to": "Xi(b,a,lambda/2-1)", "linear": "T", "translate": "0"},
    {"from": "Xi(a,a,-1)", "to": "Xi(a,a,1)", "linear": "T", "translate": "0"},
    {"from": "Xi(a,a,-1)", "to": "Xi(a,a,1-lambda/2)", "linear": "T", "translate": "1/2*t1"},
    {"from": "Xi(a,a,-1)", "to": "Xi(a,b,1-lambda/2)", "linear": "T", "translate": "1/2*t1"},
    {"from": "Xi(a,a,lambda/2-1)", "to": "Xi(a,a,1)", "linear": "T", "translate": "1/2*t1"},
    {"from": "Xi(a,a,1-lambda/2)", "to": "Xi(a,a,-1)", "linear": "T", "translate": "t2"},
    {"from": "Xi(a,b,1-lambda/2)", "to": "Xi(a,a,lambda/2-1)", "linear": "T", "translate": "0"},
    {"from": "Xi(a,b,1-lambda/2)", "to": "Xi(b,a,lambda/2-1)", "linear": "T", "translate": "0"},
    {"from": "Xi(b,a,lambda/2-1)", "to": "Xi(a,a,1-lambda/2)", "linear": "T", "translate": "t1"},
    {"from": "Xi(b,a,lambda/2-1)", "to": "Xi(a,b,1-lambda/2)", "linear": "T", "translate": "t1"}
  ]
})json";

// Strongly connected reduction of the system above; every vertex has two
// outgoing edges.
constexpr const char* kBoundary = R"json(
  "vertices": ["Xi(a,b,0)", "Xi(a,a,lambda/2-1)", "Xi(a,a,1-lambda/2)", "Xi(a,b,1-lambda/2)",
               "Xi(b,a,lambda/2-1)"],
  "edges": [
    {"from": "Xi(a,b,0)", "to": "Xi(a,a,1-lambda/2)", "linear": "T", "translate": "0"},
    {"from": "Xi(a,b,0)", "to": "Xi(a,b,1-lambda/2)", "linear": "T", "translate": "0"},
    {"from": "Xi(a,a,lambda/2-1)", "to": "Xi(a,a,1-lambda/2)", "linear": "T", "translate": "1/2*t1"},
    {"from": "Xi(a,a,lambda/2-1)", "to": "Xi(a,b,1-lambda/2)", "linear": "T", "translate": "1/2*t1"},
    {"from": "Xi(a,a,1-lambda/2)", "to": "Xi(a,a,lambda/2-1)", "linear": "T", "translate": "t2"},
    {"from": "Xi(a,a,1-lambda/2)", "to": "Xi(a,b,0)", "linear": "T", "translate": "t2"},
    {"from": "Xi(a,b,1-lambda/2)", "to": "Xi(a,a,lambda/2-1)", "linear": "T", "translate": "0"},
    {"from": "Xi(a,b,1-lambda/2)", "to": "Xi(b,a,lambda/2-1)", "linear": "T", "translate": "0"},
    {"from": "Xi(b,a,lambda/2-1)", "to": "Xi(a,a,1-lambda/2)", "linear": "T", "translate": "t1"},
    {"from": "Xi(b,a,lambda/2-1)", "to": "Xi(a,b,1-lambda/2)", "linear": "T", "translate": "t1"}
  ]
})json";

}  // namespace

std::string fixture_spec(std::string_view name) {
  if (name == "main") return std::string(kHeader) + kMain;
  if (name == "boundary-full") return std::string(kHeader) + kBoundaryFull;
  if (name == "boundary") return std::string(kHeader) + kBoundary;
  throw std::invalid_argument("unknown fixture '" + std::string(name) + "'");
}

}  // namespace gifsdim
