#include "fermopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace fermopt {

namespace {

constexpr double kSlack = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

MatchingState consecutive_state(int n_majoranas) {
  std::vector<Dimer> pairs;
  for (int a = 0; a + 1 < n_majoranas; a += 2) pairs.emplace_back(a, a + 1);
  return MatchingState(Matching(n_majoranas, std::move(pairs)));
}

struct Candidate {
  PartKey key;
  std::vector<int> ids;
  double weight;
};

std::vector<Candidate> ranked_parts(const MajoranaHamiltonian& h, const DiffusePartition& p) {
  std::vector<Candidate> out;
  for (const auto& [key, ids] : p.parts) out.push_back({key, ids, total_strength(h, ids)});
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) { return a.weight > b.weight; });
  return out;
}

std::vector<InteractionTerm> pick(const MajoranaHamiltonian& h, std::span<const int> ids) {
  std::vector<InteractionTerm> out;
  for (int id : ids) out.push_back(h[static_cast<std::size_t>(id)]);
  return out;
}

bool degenerate(const MajoranaHamiltonian& h, PipelineResult& r) {
  if (total_strength(h) > 0.0) return false;
  r.state = consecutive_state(h.n_majoranas());
  r.certificate.achieved = 0.0;
  r.certificate.upper_bound = 0.0;
  r.certificate.guarantee_holds = false;
  r.certificate.notes.push_back("all coefficients vanish; ratio undefined");
  return true;
}

void finish_ratio_check(RatioCertificate& c) {
  if (c.guarantee_holds && c.achieved < c.guaranteed_ratio * c.upper_bound - kSlack * c.upper_bound) {
    c.guarantee_holds = false;
    c.notes.push_back("achieved energy below the guaranteed fraction of sum |J|");
  }
}

bool is_matching_error(const Error& e) {
  return e.code() == ErrorCode::kDiracConditionUnmet || e.code() == ErrorCode::kMatchingFailed;
}

}  // namespace

const char* to_string(Pipeline p) {
  switch (p) {
    case Pipeline::kStrictQ: return "strictq";
    case Pipeline::kMixed24: return "mixed24";
    case Pipeline::kSsyk: return "ssyk";
  }
  return "unknown";
}

Pipeline parse_pipeline(const std::string& name) {
  if (name == "strictq") return Pipeline::kStrictQ;
  if (name == "mixed24") return Pipeline::kMixed24;
  if (name == "ssyk") return Pipeline::kSsyk;
  throw Error(ErrorCode::kInvalidArgument, "unknown pipeline '" + name + "'");
}

long long strict_q_constant(int q, int k) { return conflict_degree_bound(q, k) + 2; }

PipelineResult optimize_strict_q(const MajoranaHamiltonian& h) {
  PipelineResult r;
  auto& c = r.certificate;
  c.pipeline = Pipeline::kStrictQ;
  const auto profile = sparsity_profile(h);
  if (profile.weights_present.size() > 1) {
    throw Error(ErrorCode::kInvalidArgument, "strictq pipeline needs all terms of one weight");
  }
  const int q = profile.weights_present.empty() ? 2 : *profile.weights_present.begin();
  const int k = profile.max_degree;
  c.Q = strict_q_constant(q, std::max(k, 1));
  c.guaranteed_ratio = 1.0 / static_cast<double>(c.Q);
  c.upper_bound = total_strength(h);
  if (degenerate(h, r)) return r;

  const auto partition = diffuse_partition(h);
  c.notes.insert(c.notes.end(), partition.notes.begin(), partition.notes.end());
  const auto ranked = ranked_parts(h, partition);
  bool found = false;
  for (std::size_t i = 0; i < ranked.size() && !found; ++i) {
    const auto& cand = ranked[i];
    try {
      const auto dm = diffuse_matching(h, cand.ids);
      const auto targets = pick(h, cand.ids);
      r.state = MatchingState(dm.matching, assign_signs(dm.matching, targets));
      r.selected = cand.key;
      r.selected_terms = cand.ids;
      r.selected_weight = cand.weight;
      r.used_fallback = dm.used_fallback;
      found = true;
      if (i > 0) c.notes.push_back("heaviest part could not be matched; used part ranked " + std::to_string(i + 1));
      if (dm.used_fallback) c.notes.push_back("exhaustive matching fallback used");
    } catch (const Error& e) {
      if (!is_matching_error(e)) throw;
      c.notes.push_back(std::string("matching failed for a part: ") + e.what());
    }
  }
  if (!found) {
    r.state = consecutive_state(h.n_majoranas());
    c.notes.push_back("no part could be matched; returning the reference matching state");
  }
  c.achieved = matching_state_expectation(r.state, h);
  const bool threshold = static_cast<long long>(h.n_modes()) > static_cast<long long>(q * q - 1) * k;
  if (!threshold) c.notes.push_back("below threshold n > (q^2-1)k");
  c.guarantee_holds = found && r.selected_weight == ranked.front().weight && threshold &&
                      !r.used_fallback && partition.all_diffuse;
  finish_ratio_check(c);
  return r;
}

LiftedHamiltonian lift_to_strict4(const MajoranaHamiltonian& h) {
  LiftedHamiltonian lh;
  lh.base = h;
  const int a = h.n_majoranas();
  std::vector<InteractionTerm> terms;
  for (std::size_t t = 0; t < h.size(); ++t) {
    const auto& term = h[t];
    if (term.weight() == 2) {
      terms.push_back({{term.indices[0], term.indices[1], a, a + 1}, -term.coeff});
      lh.weight2_ids.push_back(static_cast<int>(t));
    } else if (term.weight() == 4) {
      terms.push_back(term);
      lh.weight4_ids.push_back(static_cast<int>(t));
    } else {
      throw Error(ErrorCode::kInvalidArgument, "lifting needs term weights 2 and 4 only");
    }
  }
  lh.lifted = MajoranaHamiltonian(h.n_modes() + 1, std::move(terms));
  return lh;
}

BranchState build_weight2_branch(const LiftedHamiltonian& lh, std::span<const int> part) {
  const auto dm = diffuse_matching(lh.base, part);
  auto signs = assign_signs(dm.matching, pick(lh.base, part));
  const int a = lh.base.n_majoranas();
  std::vector<Dimer> pairs = dm.matching.pairs();
  pairs.emplace_back(a, a + 1);
  signs.push_back(-1);
  BranchState b;
  b.lifted_state = MatchingState(Matching(a + 2, std::move(pairs)), std::move(signs));
  b.lifted_energy = matching_state_expectation(b.lifted_state, lh.lifted);
  b.used_fallback = dm.used_fallback;
  return b;
}

BranchState build_weight4_branch(const LiftedHamiltonian& lh, std::span<const int> part,
                                 const DiffuseMatchingOptions& options) {
  const auto dm = diffuse_matching(lh.base, part, options);
  if (dm.outer.empty()) {
    throw Error(ErrorCode::kMatchingFailed, "no Majorana outside the quartic part to mark");
  }
  const Dimer marked = *std::min_element(dm.outer.begin(), dm.outer.end());
  const int a = lh.base.n_majoranas();
  std::vector<Dimer> pairs;
  for (const auto& p : dm.matching.pairs()) {
    if (p != marked) pairs.push_back(p);
  }
  pairs.emplace_back(marked.first, a);
  pairs.emplace_back(marked.second, a + 1);
  std::sort(pairs.begin(), pairs.end());
  Matching m(a + 2, std::move(pairs));
  auto signs = assign_signs(m, pick(lh.lifted, part));
  BranchState b;
  b.lifted_state = MatchingState(std::move(m), std::move(signs));
  b.lifted_energy = matching_state_expectation(b.lifted_state, lh.lifted);
  b.used_fallback = dm.used_fallback;
  b.marked_edge = marked;
  return b;
}

PullBackResult pull_back(const MatchingState& lifted_state, const LiftedHamiltonian& lh) {
  const MajoranaHamiltonian& h = lh.base;
  const int a = h.n_majoranas();
  if (lifted_state.n_majoranas() != a + 2) {
    throw Error(ErrorCode::kInvalidArgument, "lifted state must live on 2n+2 Majoranas");
  }
  const CorrelationMatrix gamma = correlation_from_matching(lifted_state);
  const double lifted_energy = matching_state_expectation(lifted_state, lh.lifted);

  std::vector<int> outcomes;
  if (lifted_state.matching.partner(a) == a + 1) {
    outcomes.push_back(gamma(a, a + 1) > 0 ? 1 : -1);
  } else {
    outcomes = {1, -1};
  }

  std::optional<PullBackResult> best;
  for (int s : outcomes) {
    const auto cond = condition_on_dimer(gamma, a, a + 1, s);
    auto ms = matching_state_from_correlation(cond.gamma);
    if (!ms) throw Error(ErrorCode::kContractViolation, "conditioned state is not a matching state");
    PullBackResult cur;
    cur.outcome = outcomes.size() == 1 ? 0 : s;
    double e = matching_state_expectation(*ms, h);
    for (int id : lh.weight4_ids) {
      const auto verdict = classify_consistency(ms->matching, h[static_cast<std::size_t>(id)].indices);
      if (!verdict.consistent || verdict.inner_pairs.size() != 2) continue;
      MatchingState flipped = *ms;
      for (int p : verdict.inner_pairs) flipped.signs[static_cast<std::size_t>(p)] *= -1;
      const double ef = matching_state_expectation(flipped, h);
      if (ef > e) {
        *ms = std::move(flipped);
        e = ef;
        ++cur.flips;
      }
    }
    cur.state = std::move(*ms);
    cur.energy = e;
    cur.lifted_energy = lifted_energy;
    if (!best || cur.energy > best->energy) best = std::move(cur);
  }
  if (best->energy < lifted_energy - kSlack * total_strength(h)) {
    throw Error(ErrorCode::kContractViolation,
                "contract violation: pulled-back energy " + fmt(best->energy) +
                    " below lifted energy " + fmt(lifted_energy));
  }
  return *best;
}

long long mixed24_constant(int k) { return strict_q_constant(4, k); }

PipelineResult optimize_mixed_24(const MajoranaHamiltonian& h, const Mixed24Options& options) {
  PipelineResult r;
  auto& c = r.certificate;
  c.pipeline = Pipeline::kMixed24;
  const auto lh = lift_to_strict4(h);
  const int k = sparsity_profile(h).max_degree;
  c.Q = mixed24_constant(std::max(k, 1));
  c.guaranteed_ratio = 1.0 / (2.0 * static_cast<double>(c.Q));
  c.upper_bound = total_strength(h);
  if (degenerate(h, r)) return r;

  const auto partition = diffuse_partition(h);
  c.notes.insert(c.notes.end(), partition.notes.begin(), partition.notes.end());
  const auto ranked = ranked_parts(h, partition);
  DiffuseMatchingOptions dm_options;
  dm_options.best_inner_pairing = options.best_inner_pairing;
  bool found = false;
  for (std::size_t i = 0; i < ranked.size() && !found; ++i) {
    const auto& cand = ranked[i];
    try {
      const BranchState branch = cand.key.half_weight == 1 ? build_weight2_branch(lh, cand.ids)
                                                           : build_weight4_branch(lh, cand.ids, dm_options);
      const auto pb = pull_back(branch.lifted_state, lh);
      r.state = pb.state;
      r.selected = cand.key;
      r.selected_terms = cand.ids;
      r.selected_weight = cand.weight;
      r.used_fallback = branch.used_fallback;
      found = true;
      c.notes.push_back(std::string("branch ") + (cand.key.half_weight == 1 ? "weight-2" : "weight-4") +
                        ", lifted energy " + fmt(branch.lifted_energy) + ", pulled back " + fmt(pb.energy) +
                        (pb.flips > 0 ? ", " + std::to_string(pb.flips) + " double flips" : ""));
      if (i > 0) c.notes.push_back("heaviest part could not be matched; used part ranked " + std::to_string(i + 1));
      if (branch.used_fallback) c.notes.push_back("exhaustive matching fallback used");
    } catch (const Error& e) {
      if (!is_matching_error(e)) throw;
      c.notes.push_back(std::string("branch infeasible: ") + e.what());
    }
  }
  if (!found) {
    r.state = consecutive_state(h.n_majoranas());
    c.notes.push_back("no branch could be constructed; returning the reference matching state");
  }
  c.achieved = matching_state_expectation(r.state, h);
  const bool threshold = 2LL * h.n_modes() > 15LL * k;
  if (!threshold) c.notes.push_back("below threshold 2n > 15k");
  c.guarantee_holds = found && r.selected_weight == ranked.front().weight && threshold &&
                      !r.used_fallback && partition.all_diffuse;
  finish_ratio_check(c);
  return r;
}

Truncation truncate_to_sparse(const MajoranaHamiltonian& h, int k_prime) {
  if (k_prime < 1) throw Error(ErrorCode::kInvalidArgument, "k' must be at least 1");
  std::vector<int> order(h.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return h[static_cast<std::size_t>(x)].indices < h[static_cast<std::size_t>(y)].indices;
  });
  std::vector<int> seen(static_cast<std::size_t>(h.n_majoranas()), 0);
  std::vector<char> marked(h.size(), 0);
  for (int id : order) {
    for (ModeIndex i : h[static_cast<std::size_t>(id)].indices) {
      if (++seen[static_cast<std::size_t>(i)] > k_prime) marked[static_cast<std::size_t>(id)] = 1;
    }
  }
  Truncation t;
  for (std::size_t id = 0; id < h.size(); ++id) {
    (marked[id] ? t.residual_ids : t.sparse_ids).push_back(static_cast<int>(id));
  }
  t.sparse = h.subset(t.sparse_ids);
  t.residual = h.subset(t.residual_ids);
  return t;
}

long long ssyk_constant(int k) {
  const long long kk = k;
  return 1236 + 2752 * kk + 1536 * kk * kk;
}

long long ssyk_inner_constant(int k_prime) {
  const long long kp = k_prime;
  return 12 * kp * kp - 20 * kp + 10;
}

double ssyk_margin(int k, int k_prime) {
  const double qp = static_cast<double>(ssyk_inner_constant(k_prime));
  return 1.0 / qp - 32.0 * (qp + 1.0) * k * std::exp(-static_cast<double>(k_prime)) /
                        (std::sqrt(static_cast<double>(k_prime - 1)) * qp);
}

SsykResult optimize_ssyk(const MajoranaHamiltonian& h, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "ssyk pipeline needs k >= 1");
  for (const auto& t : h.terms()) {
    if (t.weight() != 4) throw Error(ErrorCode::kInvalidArgument, "ssyk pipeline needs a strictly 4-local Hamiltonian");
  }
  SsykResult out;
  out.k_prime = 8 * (k + 1);
  out.truncation = truncate_to_sparse(h, out.k_prime);
  auto& r = out.result;
  auto& c = r.certificate;
  c.pipeline = Pipeline::kSsyk;
  c.Q = ssyk_constant(k);
  c.guaranteed_ratio = 1.0 / static_cast<double>(c.Q);
  c.upper_bound = total_strength(h);
  if (degenerate(h, r)) return out;

  const double residual_weight = total_strength(out.truncation.residual);
  out.inner_weight = total_strength(out.truncation.sparse);
  bool inner_ok = false;
  if (out.truncation.sparse.empty()) {
    r.state = consecutive_state(h.n_majoranas());
    c.notes.push_back("truncated Hamiltonian is empty");
  } else {
    PipelineResult inner = optimize_strict_q(out.truncation.sparse);
    r.state = inner.state;
    r.used_fallback = inner.used_fallback;
    r.selected = inner.selected;
    r.selected_weight = inner.selected_weight;
    for (int id : inner.selected_terms) {
      r.selected_terms.push_back(out.truncation.sparse_ids[static_cast<std::size_t>(id)]);
    }
    for (const auto& note : inner.certificate.notes) c.notes.push_back("inner: " + note);
    inner_ok = !inner.selected_terms.empty() && !inner.used_fallback &&
               inner.selected_weight >= out.inner_weight / static_cast<double>(ssyk_inner_constant(out.k_prime));
  }
  out.sparse_energy = matching_state_expectation(r.state, out.truncation.sparse);
  out.residual_energy = matching_state_expectation(r.state, out.truncation.residual);
  c.achieved = matching_state_expectation(r.state, h);

  const double scale = std::sqrt(2.0 * k * h.n_modes());
  c.notes.push_back("k' = " + std::to_string(out.k_prime) + ", inner Q' = " +
                    std::to_string(ssyk_inner_constant(out.k_prime)));
  c.notes.push_back("residual sum |J| = " + fmt(residual_weight) + " over " +
                    std::to_string(out.truncation.residual.size()) + " terms");
  c.notes.push_back("margin 1/Q' - 32(Q'+1)k e^-k'/(sqrt(k'-1)Q') = " + fmt(ssyk_margin(k, out.k_prime)));
  c.notes.push_back("sparse energy " + fmt(out.sparse_energy) + ", residual energy " + fmt(out.residual_energy));
  c.notes.push_back("raw (unnormalized) achieved " + fmt(c.achieved * scale) + ", upper bound " +
                    fmt(c.upper_bound * scale));
  const bool threshold = static_cast<long long>(h.n_modes()) > 120LL * (k + 1);
  if (!threshold) c.notes.push_back("below threshold n > 120(k+1)");
  c.guarantee_holds = threshold && inner_ok;
  if (c.achieved < c.guaranteed_ratio * c.upper_bound - kSlack * c.upper_bound) {
    c.notes.push_back("concentration event not realized for this draw");
  }
  finish_ratio_check(c);
  return out;
}

PipelineResult optimize_auto(const MajoranaHamiltonian& h) {
  const auto weights = sparsity_profile(h).weights_present;
  if (weights.size() <= 1) return optimize_strict_q(h);
  if (std::all_of(weights.begin(), weights.end(), [](int w) { return w == 2 || w == 4; })) {
    return optimize_mixed_24(h);
  }
  throw Error(ErrorCode::kInvalidArgument, "no pipeline handles this mix of term weights");
}

std::string serialize_certificate(const RatioCertificate& c) {
  nlohmann::ordered_json doc;
  doc["pipeline"] = to_string(c.pipeline);
  doc["achieved"] = c.achieved;
  doc["upper_bound"] = c.upper_bound;
  doc["Q"] = c.Q;
  doc["guaranteed_ratio"] = c.guaranteed_ratio;
  doc["guarantee_holds"] = c.guarantee_holds;
  doc["notes"] = c.notes;
  return doc.dump(1) + "\n";
}

RatioCertificate parse_certificate(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    RatioCertificate c;
    c.pipeline = parse_pipeline(doc.at("pipeline").get<std::string>());
    c.achieved = doc.at("achieved").get<double>();
    c.upper_bound = doc.at("upper_bound").get<double>();
    c.Q = doc.at("Q").get<long long>();
    c.guaranteed_ratio = doc.at("guaranteed_ratio").get<double>();
    c.guarantee_holds = doc.at("guarantee_holds").get<bool>();
    c.notes = doc.value("notes", std::vector<std::string>{});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace fermopt
