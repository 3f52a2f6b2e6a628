#include "ccrelay/formal_signal.hpp"

#include <sstream>

namespace ccrelay {

namespace {

template <class Key>
void accumulate(std::map<Key, Complex>& into, const Key& key, Complex value) {
  auto [it, inserted] = into.try_emplace(key, value);
  if (!inserted) it->second += value;
  if (std::abs(it->second) <= FormalSignal::kPruneTolerance) into.erase(it);
}

template <class Key>
void scale_all(std::map<Key, Complex>& m, Complex c) {
  for (auto it = m.begin(); it != m.end();) {
    it->second *= c;
    if (std::abs(it->second) <= FormalSignal::kPruneTolerance) {
      it = m.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace

std::string NoiseLabel::str() const {
  std::ostringstream os;
  if (kind == Kind::BaseStation) {
    os << "nBS[s" << stage << ",tx" << slot << ",ant" << node << "]";
  } else {
    os << "n" << node << "[s" << stage << ",j" << slot << "]";
  }
  return os.str();
}

FormalSignal FormalSignal::symbol(const SubpacketId& id, Complex coefficient) {
  FormalSignal s;
  accumulate(s.terms_, id, coefficient);
  return s;
}

FormalSignal FormalSignal::noise(const NoiseLabel& label, Complex coefficient) {
  FormalSignal s;
  accumulate(s.noise_, label, coefficient);
  return s;
}

Complex FormalSignal::coefficient(const SubpacketId& id) const {
  auto it = terms_.find(id);
  return it == terms_.end() ? Complex{} : it->second;
}

Complex FormalSignal::coefficient(const NoiseLabel& label) const {
  auto it = noise_.find(label);
  return it == noise_.end() ? Complex{} : it->second;
}

std::set<NoiseLabel> FormalSignal::noise_sources() const {
  std::set<NoiseLabel> out;
  for (const auto& [label, c] : noise_) out.insert(label.source());
  return out;
}

FormalSignal FormalSignal::signal_part() const {
  FormalSignal s;
  s.terms_ = terms_;
  return s;
}

FormalSignal& FormalSignal::operator+=(const FormalSignal& other) {
  for (const auto& [id, c] : other.terms_) accumulate(terms_, id, c);
  for (const auto& [label, c] : other.noise_) accumulate(noise_, label, c);
  return *this;
}

FormalSignal& FormalSignal::operator-=(const FormalSignal& other) {
  for (const auto& [id, c] : other.terms_) accumulate(terms_, id, -c);
  for (const auto& [label, c] : other.noise_) accumulate(noise_, label, -c);
  return *this;
}

FormalSignal& FormalSignal::operator*=(Complex c) {
  scale_all(terms_, c);
  scale_all(noise_, c);
  return *this;
}

std::string FormalSignal::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [id, c] : terms_) {
    os << (first ? "" : " + ") << c << "*" << id.str();
    first = false;
  }
  for (const auto& [label, c] : noise_) {
    os << (first ? "" : " + ") << c << "*" << label.str();
    first = false;
  }
  return first ? "0" : os.str();
}

FormalSignal formal_add(const FormalSignal& a, const FormalSignal& b) { return a + b; }

FormalSignal formal_scale(const FormalSignal& s, Complex coefficient) { return coefficient * s; }

}  // namespace ccrelay
