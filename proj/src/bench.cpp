// Copyright 2026 The MCABE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcabe/bench.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "mcabe/certs.hpp"

namespace mcabe {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kWarmup = 3;

std::set<std::string> make_attrs(int n) {
  std::set<std::string> attrs;
  for (int i = 0; i < n; ++i) attrs.insert("attr" + std::to_string(i));
  return attrs;
}

AccessTree make_and_tree(int n) {
  std::vector<PolicyNode> leaves;
  leaves.reserve(n);
  for (int i = 0; i < n; ++i) leaves.push_back(PolicyNode::leaf("attr" + std::to_string(i)));
  if (n == 1) return AccessTree::from_root(std::move(leaves.front()));
  return AccessTree::from_root(PolicyNode::gate(n, std::move(leaves)));
}

template <typename Fn>
std::vector<double> time_samples(int samples, Fn&& fn) {
  std::vector<double> out;
  out.reserve(samples);
  for (int i = 0; i < samples + kWarmup; ++i) {
    auto t0 = Clock::now();
    fn();
    auto t1 = Clock::now();
    if (i >= kWarmup)
      out.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return out;
}

}  // namespace

const char* bench_op_name(BenchOp op) {
  switch (op) {
    case BenchOp::EncryptDo: return "encrypt_do";
    case BenchOp::EncryptEsp: return "encrypt_esp";
    case BenchOp::Keygen: return "keygen";
    case BenchOp::DecryptDsp: return "decrypt_dsp";
    case BenchOp::DecryptDr: return "decrypt_dr";
    case BenchOp::Revoke: return "revoke";
  }
  return "unknown";
}

std::optional<BenchOp> bench_op_from_name(std::string_view name) {
  for (BenchOp op : {BenchOp::EncryptDo, BenchOp::EncryptEsp, BenchOp::Keygen,
                     BenchOp::DecryptDsp, BenchOp::DecryptDr, BenchOp::Revoke})
    if (name == bench_op_name(op)) return op;
  return std::nullopt;
}

BenchResult summarize(std::string operation, int attr_count, std::vector<double> samples_ms) {
  BenchResult r;
  r.operation = std::move(operation);
  r.attr_count = attr_count;
  r.samples_ms = std::move(samples_ms);
  double n = static_cast<double>(r.samples_ms.size());
  double sum = 0;
  for (double s : r.samples_ms) sum += s;
  r.mean_ms = sum / n;
  double var = 0;
  for (double s : r.samples_ms) var += (s - r.mean_ms) * (s - r.mean_ms);
  double sd = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  double half = 1.96 * sd / std::sqrt(n);
  r.ci_low_ms = r.mean_ms - half;
  r.ci_high_ms = r.mean_ms + half;
  return r;
}

std::vector<BenchResult> bench_keygen(const PublicKey& pk, const MasterKey& mk,
                                      std::span<const int> attr_counts, int samples,
                                      RandomSource& rng) {
  std::vector<std::set<std::string>> attr_sets;
  attr_sets.reserve(attr_counts.size());
  for (int n : attr_counts) attr_sets.push_back(make_attrs(n));

  // Samples are interleaved round-robin across the counts so clock-frequency
  // drift lands on every count equally instead of biasing whole blocks.
  for (const auto& attrs : attr_sets)
    for (int i = 0; i < kWarmup; ++i) keygen(pk, mk, attrs, rng);

  std::vector<std::vector<double>> per_count(attr_counts.size());
  for (int s = 0; s < samples; ++s) {
    for (std::size_t c = 0; c < attr_sets.size(); ++c) {
      auto t0 = Clock::now();
      keygen(pk, mk, attr_sets[c], rng);
      auto t1 = Clock::now();
      per_count[c].push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
  }

  std::vector<BenchResult> out;
  for (std::size_t c = 0; c < attr_sets.size(); ++c)
    out.push_back(summarize("keygen", attr_counts[c], std::move(per_count[c])));
  return out;
}

namespace {

std::vector<BenchResult> bench_one(BenchOp op, const PublicKey& pk, const MasterKey& mk,
                                   std::span<const int> counts, int samples, RandomSource& rng) {
  std::vector<BenchResult> out;
  switch (op) {
    case BenchOp::Keygen:
      return bench_keygen(pk, mk, counts, samples, rng);

    case BenchOp::EncryptDo: {
      std::set<Privilege> privs{Privilege::Read, Privilege::Modify, Privilege::Delete};
      std::map<Privilege, PrivilegeSignature> sigs;
      for (Privilege k : privs) sigs.emplace(k, make_signature(pk, k, rng));
      GTElement m = GTElement::random_nonidentity(rng);
      for (int n : counts) {
        auto t = time_samples(samples, [&] { encrypt_do(pk, m, privs, sigs, rng); });
        out.push_back(summarize("encrypt_do", n, std::move(t)));
      }
      return out;
    }

    case BenchOp::EncryptEsp: {
      std::set<Privilege> privs{Privilege::Read};
      std::map<Privilege, PrivilegeSignature> sigs;
      sigs.emplace(Privilege::Read, make_signature(pk, Privilege::Read, rng));
      GTElement m = GTElement::random_nonidentity(rng);
      for (int n : counts) {
        AccessTree tree = make_and_tree(n);
        MaskedMessage mm = encrypt_do(pk, m, privs, sigs, rng);
        auto t = time_samples(samples, [&] {
          encrypt_esp(pk, mm.s, tree, mm, "bench-file", 0, {}, rng);
        });
        out.push_back(summarize("encrypt_esp", n, std::move(t)));
      }
      return out;
    }

    case BenchOp::DecryptDsp: {
      std::set<Privilege> privs{Privilege::Read};
      std::map<Privilege, PrivilegeSignature> sigs;
      sigs.emplace(Privilege::Read, make_signature(pk, Privilege::Read, rng));
      GTElement m = GTElement::random_nonidentity(rng);
      for (int n : counts) {
        AccessTree tree = make_and_tree(n);
        MaskedMessage mm = encrypt_do(pk, m, privs, sigs, rng);
        Ciphertext ct = encrypt_esp(pk, mm.s, tree, mm, "bench-file", 0, {}, rng);
        SecretKey sk = keygen(pk, mk, make_attrs(n), rng);
        auto t = time_samples(samples, [&] { decrypt_dsp(sk, ct, Privilege::Read); });
        out.push_back(summarize("decrypt_dsp", n, std::move(t)));
      }
      return out;
    }

    case BenchOp::DecryptDr: {
      std::set<Privilege> privs{Privilege::Read};
      std::map<Privilege, PrivilegeSignature> sigs;
      sigs.emplace(Privilege::Read, make_signature(pk, Privilege::Read, rng));
      GTElement m = GTElement::random_nonidentity(rng);
      std::vector<std::uint8_t> payload(1024, 0xab);
      auto sealed = seal_payload(m, "bench-file", payload, rng);
      GTElement masked = m * sigs.at(Privilege::Read).sig;
      AuthorizationCert cert;
      cert.pk = pk;
      cert.file_ids = {"bench-file"};
      cert.valid_period = {0, 1};
      cert.privileges.emplace("bench-file", privs);
      cert.signatures.emplace(FilePrivilege{"bench-file", Privilege::Read},
                              sigs.at(Privilege::Read).sig);
      for (int n : counts) {
        auto t = time_samples(samples, [&] {
          decrypt_dr(masked, cert, Privilege::Read, "bench-file", sealed, 0);
        });
        out.push_back(summarize("decrypt_dr", n, std::move(t)));
      }
      return out;
    }

    case BenchOp::Revoke: {
      // Count axis = registered-DR population; the revocation itself always
      // rotates one file's three signatures.
      std::set<Privilege> privs{Privilege::Read, Privilege::Modify, Privilege::Delete};
      for (int n : counts) {
        std::map<Privilege, PrivilegeSignature> sigs;
        std::map<Privilege, GTElement> c_tilde;
        GTElement m = GTElement::random_nonidentity(rng);
        for (Privilege k : privs) {
          sigs.emplace(k, make_signature(pk, k, rng));
          c_tilde.emplace(k, m * sigs.at(k).sig);
        }
        // Population of mask value records, sized n.
        MaskValueTable table;
        for (int i = 0; i < n; ++i) table.register_dr("dr" + std::to_string(i), rng);
        table.record_grant("dr0", "bench-file", privs, {0, 1});
        auto t = time_samples(samples, [&] {
          for (auto& [k, sig] : sigs) {
            auto [fresh, delta] = rotate_signature(pk, sig, rng);
            sig = fresh;
            c_tilde[k] = c_tilde[k] * delta;
          }
        });
        out.push_back(summarize("revoke", n, std::move(t)));
      }
      return out;
    }
  }
  return out;
}

}  // namespace

std::vector<BenchResult> bench_suite(std::span<const BenchOp> ops,
                                     std::span<const int> attr_counts, int samples,
                                     RandomSource& rng) {
  SeededRandom setup_rng(0x6d63616265ull);
  auto [pk, mk] = setup(setup_rng);
  std::vector<BenchResult> out;
  for (BenchOp op : ops) {
    auto rows = bench_one(op, pk, mk, attr_counts, samples, rng);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

void write_csv(std::ostream& out, std::span<const BenchResult> results) {
  out << "operation,attr_count,mean_ms,ci_low_ms,ci_high_ms,samples\n";
  for (const auto& r : results)
    out << r.operation << ',' << r.attr_count << ',' << r.mean_ms << ',' << r.ci_low_ms << ','
        << r.ci_high_ms << ',' << r.samples_ms.size() << '\n';
}

void write_gnuplot(std::ostream& out, std::span<const BenchResult> results) {
  std::string current;
  for (const auto& r : results) {
    if (r.operation != current) {
      if (!current.empty()) out << "\n\n";
      out << "# " << r.operation << "\n# attr_count mean_ms ci_low_ms ci_high_ms\n";
      current = r.operation;
    }
    out << r.attr_count << ' ' << r.mean_ms << ' ' << r.ci_low_ms << ' ' << r.ci_high_ms << '\n';
  }
}

double linear_fit_r2(std::span<const BenchResult> results) {
  double n = static_cast<double>(results.size());
  if (n < 2) return 1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : results) {
    sx += r.attr_count;
    sy += r.mean_ms;
    sxx += static_cast<double>(r.attr_count) * r.attr_count;
    sxy += r.attr_count * r.mean_ms;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  double mean_y = sy / n;
  for (const auto& r : results) {
    double pred = slope * r.attr_count + intercept;
    ss_res += (r.mean_ms - pred) * (r.mean_ms - pred);
    ss_tot += (r.mean_ms - mean_y) * (r.mean_ms - mean_y);
  }
  if (ss_tot == 0) return 1.0;
  return 1.0 - ss_res / ss_tot;
}

double linear_fit_slope(std::span<const BenchResult> results) {
  double n = static_cast<double>(results.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : results) {
    sx += r.attr_count;
    sy += r.mean_ms;
    sxx += static_cast<double>(r.attr_count) * r.attr_count;
    sxy += r.attr_count * r.mean_ms;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace mcabe
