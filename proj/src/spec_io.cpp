#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>

#include "gifsdim/errors.hpp"
#include "gifsdim/gifs.hpp"

namespace gifsdim {

namespace {

using Json = nlohmann::ordered_json;

// Precision of p-adic images of exact constants.
constexpr int kPadicDigits = 128;

// One coordinate value; `im` is nonzero only for complex coordinates.
struct Coord {
  QuadraticNumber re;
  QuadraticNumber im;
};

class SpecReader {
 public:
  explicit SpecReader(std::string_view text) {
    try {
      doc_ = Json::parse(text);
    } catch (const Json::exception& e) {
      throw ParseError(std::string("spec file: ") + e.what());
    }
    if (!doc_.is_object()) throw ParseError("spec file: top level must be an object");
  }

  GifsGraph read() {
    read_space();
    read_constants();
    read_vertices();
    std::vector<Edge> edges;
    const Json& list = require(doc_, "edges");
    if (!list.is_array()) throw ParseError("spec file: 'edges' must be an array");
    int index = 0;
    for (const auto& e : list) edges.push_back(read_edge(e, index++));
    return GifsGraph(sig_, vertices_, std::move(edges), embeddings_);
  }

 private:
  static const Json& require(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(std::string("spec file: missing '") + key + "'");
    return obj.at(key);
  }

  int coords() const { return sig_.coordinates(); }

  void read_space() {
    const Json& s = require(doc_, "space");
    try {
      sig_.real = s.value("real", 0);
      sig_.complex = s.value("complex", 0);
      sig_.primes = s.value("primes", std::vector<std::int64_t>{});
    } catch (const Json::exception& e) {
      throw ParseError(std::string("spec file: bad 'space': ") + e.what());
    }
    try {
      sig_.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("spec file: ") + e.what());
    }
  }

  QuadraticNumber scalar_json(const Json& v, int coord, bool* used_vector) {
    if (v.is_number_integer()) return QuadraticNumber::rational(BigInt(v.get<std::int64_t>()));
    if (v.is_number()) return QuadraticNumber::from_double(v.get<double>());
    if (!v.is_string()) throw ParseError("spec file: expected an expression string, got " + v.dump());
    return eval(v.get<std::string>(), coord, used_vector);
  }

  // Evaluates an expression at one coordinate: vector constants resolve to
  // their component there, scalars to themselves.
  QuadraticNumber eval(const std::string& text, int coord, bool* used_vector) {
    auto lookup = [&](std::string_view name) -> std::optional<QuadraticNumber> {
      auto key = std::string(name);
      if (auto it = scalars_.find(key); it != scalars_.end()) return it->second;
      if (auto it = vectors_.find(key); it != vectors_.end()) {
        if (coord < 0) throw ParseError("spec file: vector constant '" + key + "' used in a scalar context");
        if (used_vector) *used_vector = true;
        return it->second[static_cast<std::size_t>(coord)].re;
      }
      return std::nullopt;
    };
    return QuadraticNumber::parse(text, lookup);
  }

  std::vector<Coord> vector_json(const Json& v) {
    std::vector<Coord> out;
    if (v.is_array()) {
      if (static_cast<int>(v.size()) != coords())
        throw ParseError("spec file: vector " + v.dump() + " needs " + std::to_string(coords()) + " entries");
      for (int i = 0; i < coords(); ++i) {
        const Json& c = v[static_cast<std::size_t>(i)];
        const bool is_complex = i >= sig_.real && i < sig_.real + sig_.complex;
        if (c.is_array()) {
          if (!is_complex || c.size() != 2) throw ParseError("spec file: [re, im] pairs only for complex coordinates");
          out.push_back({scalar_json(c[0], i, nullptr), scalar_json(c[1], i, nullptr)});
        } else {
          out.push_back({scalar_json(c, i, nullptr), QuadraticNumber::rational(0)});
        }
      }
      return out;
    }
    for (int i = 0; i < coords(); ++i) out.push_back({scalar_json(v, i, nullptr), QuadraticNumber::rational(0)});
    return out;
  }

  void read_constants() {
    if (!doc_.contains("constants")) return;
    const Json& consts = doc_.at("constants");
    if (!consts.is_object()) throw ParseError("spec file: 'constants' must be an object");
    for (const auto& [name, v] : consts.items()) {
      if (name == "sqrt") throw ParseError("spec file: 'sqrt' is reserved");
      if (v.is_array()) {
        vectors_[name] = vector_json(v);
      } else if (v.is_object()) {
        QuadraticNumber value = scalar_json(require(v, "value"), -1, nullptr);
        scalars_[name] = value;
        if (v.contains("selectors")) {
          for (const auto& [prime, residue] : v.at("selectors").items()) {
            std::int64_t p = 0;
            try {
              p = std::stoll(prime);
            } catch (const std::exception&) {
              throw ParseError("spec file: selector key '" + prime + "' is not a prime");
            }
            if (value.is_rational()) throw ParseError("spec file: selector on rational constant '" + name + "'");
            embeddings_.emplace_back(value, p, residue.get<std::int64_t>(), kPadicDigits);
          }
        }
      } else if (v.is_string()) {
        bool used_vector = false;
        std::vector<Coord> comps;
        for (int i = 0; i < coords(); ++i)
          comps.push_back({eval(v.get<std::string>(), i, &used_vector), QuadraticNumber::rational(0)});
        if (used_vector)
          vectors_[name] = std::move(comps);
        else
          scalars_[name] = comps.front().re;
      } else {
        scalars_[name] = scalar_json(v, -1, nullptr);
      }
    }
  }

  void read_vertices() {
    const Json& v = require(doc_, "vertices");
    if (!v.is_array()) throw ParseError("spec file: 'vertices' must be an array");
    for (const auto& name : v) {
      if (!name.is_string()) throw ParseError("spec file: vertex names must be strings");
      vertices_.push_back(name.get<std::string>());
    }
  }

  int vertex(const Json& name) const {
    if (!name.is_string()) throw ParseError("spec file: edge endpoints must be vertex names");
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (vertices_[i] == name.get<std::string>()) return static_cast<int>(i);
    throw ParseError("spec file: unknown vertex '" + name.get<std::string>() + "'");
  }

  PadicNumber padic_image(const QuadraticNumber& x, std::size_t k) const {
    const std::int64_t p = sig_.primes[k];
    if (x.is_rational()) {
      if (x.is_zero()) return PadicNumber::zero(p);
      return PadicNumber::from_rational(x.a(), x.c(), p, kPadicDigits);
    }
    for (const auto& e : embeddings_)
      if (e.prime() == p) return e.apply(x);
    throw ParseError("spec file: no selector fixes the embedding into Q_" + std::to_string(p));
  }

  Edge read_edge(const Json& e, int index) {
    if (!e.is_object()) throw ParseError("spec file: edges must be objects");
    Edge edge;
    edge.from = vertex(require(e, "from"));
    edge.to = vertex(require(e, "to"));
    edge.label = e.value("label", index);
    const Json& lin = require(e, "linear");
    const Json tr = e.contains("translate") ? e.at("translate") : Json("0");
    std::vector<Coord> a = vector_json(lin);
    std::vector<Coord> t = vector_json(tr);
    if (e.contains("name")) {
      edge.name = e.at("name").get<std::string>();
    } else if (lin.is_string() && tr.is_string()) {
      edge.name = lin.get<std::string>() + "(x)";
      if (tr.get<std::string>() != "0") edge.name += "+" + tr.get<std::string>();
    } else {
      edge.name = "f" + std::to_string(edge.label);
    }

    const std::size_t r = static_cast<std::size_t>(sig_.real);
    const std::size_t s = static_cast<std::size_t>(sig_.complex);
    AffineMap& f = edge.map;
    for (std::size_t i = 0; i < r; ++i) {
      f.linear.reals.push_back(embed_real(a[i].re));
      f.translate.reals.push_back(embed_real(t[i].re));
      f.linear.exact.reals.push_back(a[i].re);
      f.exact_translate.reals.push_back(t[i].re);
    }
    for (std::size_t i = r; i < r + s; ++i) {
      f.linear.complexes.emplace_back(embed_real(a[i].re), embed_real(a[i].im));
      f.translate.complexes.emplace_back(embed_real(t[i].re), embed_real(t[i].im));
    }
    if (s > 0) {
      f.linear.exact = {};
      f.exact_translate = {};
    }
    for (std::size_t k = 0; k < sig_.primes.size(); ++k) {
      const std::size_t i = r + s + k;
      f.linear.padics.push_back(padic_image(a[i].re, k));
      f.translate.padics.push_back(padic_image(t[i].re, k));
      if (s == 0) {
        f.linear.exact.padics.push_back(a[i].re);
        f.exact_translate.padics.push_back(t[i].re);
      }
    }
    return edge;
  }

  Json doc_;
  SpaceSignature sig_;
  std::map<std::string, QuadraticNumber> scalars_;
  std::map<std::string, std::vector<Coord>> vectors_;
  std::vector<PadicEmbedding> embeddings_;
  std::vector<std::string> vertices_;
};

std::string exact_or_double(const std::vector<QuadraticNumber>& exact, std::size_t i, double fallback) {
  if (i < exact.size()) return exact[i].to_string();
  return QuadraticNumber::from_double(fallback).to_string();
}

Json coords_json(const GifsGraph& g, const DiagonalMap* lin, const AffineMap* aff) {
  const auto& sig = g.signature();
  Json out = Json::array();
  const ExactCoords& ex = lin ? lin->exact : aff->exact_translate;
  for (std::size_t i = 0; i < static_cast<std::size_t>(sig.real); ++i)
    out.push_back(exact_or_double(ex.reals, i, lin ? lin->reals[i] : aff->translate.reals[i]));
  for (std::size_t i = 0; i < static_cast<std::size_t>(sig.complex); ++i) {
    auto z = lin ? lin->complexes[i] : aff->translate.complexes[i];
    out.push_back(Json::array({QuadraticNumber::from_double(z.real()).to_string(),
                               QuadraticNumber::from_double(z.imag()).to_string()}));
  }
  for (std::size_t k = 0; k < sig.primes.size(); ++k) {
    if (k >= ex.padics.size())
      throw std::invalid_argument("serialize_spec: p-adic coordinates need exact values");
    out.push_back(ex.padics[k].to_string());
  }
  return out;
}

}  // namespace

GifsGraph parse_spec(std::string_view text) { return SpecReader(text).read(); }

std::string serialize_spec(const GifsGraph& g) {
  Json doc;
  const auto& sig = g.signature();
  doc["space"] = {{"real", sig.real}, {"complex", sig.complex}, {"primes", sig.primes}};
  Json consts = Json::object();
  for (const auto& e : g.embeddings()) {
    consts["generator_" + std::to_string(e.prime())] = {
        {"value", e.generator().to_string()},
        {"selectors", {{std::to_string(e.prime()), e.selector()}}}};
  }
  doc["constants"] = consts;
  doc["vertices"] = g.vertices();
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    Json je;
    je["from"] = g.vertices()[e.from];
    je["to"] = g.vertices()[e.to];
    je["label"] = e.label;
    je["name"] = e.name;
    je["linear"] = coords_json(g, &e.map.linear, nullptr);
    je["translate"] = coords_json(g, nullptr, &e.map);
    edges.push_back(std::move(je));
  }
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

}  // namespace gifsdim
