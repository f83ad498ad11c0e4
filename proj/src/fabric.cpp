// Copyright 2026 The qsdc-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsdc/fabric.hpp"

#include <utility>

#include "qsdc/errors.hpp"

namespace qsdc {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(what) + " must lie in [0, 1]");
  }
}

const Matrix2 kPauliX{0.0, 1.0, 1.0, 0.0};

}  // namespace

NoiseModel NoiseModel::bit_flip(double p) {
  require_probability(p, "bit-flip probability");
  return {NoiseKind::BitFlip, p};
}

NoiseModel NoiseModel::depolarizing(double p) {
  require_probability(p, "depolarizing probability");
  return {NoiseKind::Depolarizing, p};
}

void NoiseModel::apply(Photon& photon, RandomSource& rng) const {
  const double effective = kind == NoiseKind::None ? 0.0 : p;
  if (!rng.bernoulli(effective)) {
    return;
  }
  if (kind == NoiseKind::BitFlip) {
    photon.apply(kPauliX);
  } else {
    const Basis basis = rng.bit() ? Basis::X : Basis::Z;
    photon = Photon::prepare({basis, rng.bit()});
  }
}

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::BitFlip:
      return "bitflip";
    case NoiseKind::Depolarizing:
      return "depolarizing";
    case NoiseKind::None:
      break;
  }
  return "none";
}

NoiseKind parse_noise_kind(std::string_view s) {
  if (s == "none") return NoiseKind::None;
  if (s == "bitflip") return NoiseKind::BitFlip;
  if (s == "depolarizing") return NoiseKind::Depolarizing;
  throw ConfigError("unknown noise kind '" + std::string(s) + "'");
}

QuantumChannel::QuantumChannel(std::string from, std::string to, NoiseModel noise, double loss)
    : from_(std::move(from)), to_(std::move(to)), noise_(noise), loss_(loss) {
  require_probability(loss, "loss");
  require_probability(noise.p, "noise probability");
}

void QuantumChannel::add_tap(std::shared_ptr<Tap> tap) { taps_.push_back(std::move(tap)); }

Slot QuantumChannel::transmit(Photon photon, std::size_t position, RandomSource& rng) {
  for (const auto& tap : taps_) {
    photon = tap->intercept(std::move(photon), position);
  }
  if (rng.bernoulli(loss_)) {
    return std::nullopt;
  }
  noise_.apply(photon, rng);
  return photon;
}

std::vector<Slot> QuantumChannel::transmit(std::vector<Slot> photons, RandomSource& rng) {
  std::vector<Slot> out;
  out.reserve(photons.size());
  for (std::size_t i = 0; i < photons.size(); ++i) {
    if (photons[i]) {
      out.push_back(transmit(std::move(*photons[i]), i, rng));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

Json& Transcript::push(std::string_view type) {
  Json event;
  event["seq"] = events_.size();
  event["event"] = type;
  events_.push_back(std::move(event));
  return events_.back();
}

void Transcript::quantum_send(std::string_view from, std::string_view to, std::size_t count) {
  Json& e = push("quantum_send");
  e["from"] = from;
  e["to"] = to;
  e["count"] = count;
}

void Transcript::quantum_deliver(std::string_view from, std::string_view to,
                                 const std::vector<Slot>& slots) {
  Json& e = push("quantum_deliver");
  e["from"] = from;
  e["to"] = to;
  Json lost = Json::array();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) lost.push_back(i);
  }
  e["arrived"] = slots.size() - lost.size();
  e["lost"] = std::move(lost);
}

void Transcript::announcement(std::uint64_t seq, std::string_view sender, std::string_view kind,
                              const Json& payload) {
  Json& e = push("announcement");
  e["broadcast_seq"] = seq;
  e["sender"] = sender;
  e["kind"] = kind;
  e["payload"] = payload;
}

void Transcript::measurement(std::string_view party, std::string_view stage, std::size_t count) {
  Json& e = push("measurement");
  e["party"] = party;
  e["stage"] = stage;
  e["count"] = count;
}

void Transcript::decision(std::string_view party, bool aborted, double error_rate,
                          std::string_view reason) {
  Json& e = push("decision");
  e["party"] = party;
  e["aborted"] = aborted;
  e["error_rate"] = error_rate;
  if (!reason.empty()) e["reason"] = reason;
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const Json& e : events_) {
    out += e.dump();
    out.push_back('\n');
  }
  return out;
}

const Announcement& ClassicalChannel::announce(std::string_view sender, std::string_view kind,
                                               Json payload) {
  Announcement a{log_.size(), std::string(sender), std::string(kind), std::move(payload)};
  transcript_->announcement(a.seq, a.sender, a.kind, a.payload);
  log_.push_back(std::move(a));
  return log_.back();
}

const Announcement* ClassicalChannel::latest(std::string_view kind) const {
  for (auto it = log_.rbegin(); it != log_.rend(); ++it) {
    if (it->kind == kind) return &*it;
  }
  return nullptr;
}

std::vector<std::size_t> arrived_positions(const std::vector<Slot>& slots) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) out.push_back(i);
  }
  return out;
}

}  // namespace qsdc
