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

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "mcabe/actors.hpp"

namespace {

using namespace mcabe;

struct GlobalOpts {
  std::string workspace = "mcabe-ws";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> now;
};

std::filesystem::path ws_path(const GlobalOpts& g, const char* leaf) {
  return std::filesystem::path(g.workspace) / leaf;
}

std::filesystem::path dr_credentials_path(const GlobalOpts& g, const std::string& dr_id) {
  return std::filesystem::path(g.workspace) / "dr" / (dr_id + ".bin");
}

void require_simple_id(const std::string& id, const char* what) {
  if (id.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is empty");
  for (char c : id)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
      throw Error(ErrorCode::InvalidArgument,
                  std::string(what) + " may only contain [A-Za-z0-9_.-]");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::StorageError, "cannot read " + path.string());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::StorageError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::unique_ptr<RandomSource> make_rng(const GlobalOpts& g) {
  if (g.seed) return std::make_unique<SeededRandom>(*g.seed);
  return std::make_unique<SystemRandom>();
}

std::function<std::int64_t()> make_clock(const GlobalOpts& g) {
  if (g.now) {
    std::int64_t fixed = *g.now;
    return [fixed] { return fixed; };
  }
  return [] {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

void require_workspace(const GlobalOpts& g) {
  if (!std::filesystem::exists(ws_path(g, "ta-state.bin")))
    throw Error(ErrorCode::StorageError,
                "workspace " + g.workspace + " is not initialized; run setup first");
}

TaState load_ta(const GlobalOpts& g) {
  require_workspace(g);
  return decode_ta_state(read_file(ws_path(g, "ta-state.bin")));
}

void save_ta(const GlobalOpts& g, const TaState& ta) {
  write_file(ws_path(g, "ta-state.bin"), encode_ta_state(ta));
}

Harness make_harness(const GlobalOpts& g, TaState ta, RandomSource& rng) {
  Harness::Config cfg;
  cfg.store_dir = ws_path(g, "store");
  cfg.clock = make_clock(g);
  return Harness(std::move(ta), cfg, rng);
}

void load_all_dr_credentials(const GlobalOpts& g, Harness& h) {
  auto dir = ws_path(g, "dr");
  if (!std::filesystem::exists(dir)) return;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".bin")
      h.load_dr_credentials(decode_dr_credentials(read_file(entry.path())));
}

void persist_dr_credentials(const GlobalOpts& g, Harness& h, const std::string& dr_id) {
  if (auto creds = h.dr_credentials(dr_id))
    write_file(dr_credentials_path(g, dr_id), encode_dr_credentials(*creds));
}

void dump_transcript(const GlobalOpts& g, const Harness& h) {
  std::ofstream out(ws_path(g, "last-transcript.jsonl"), std::ios::trunc);
  h.transcript().export_jsonl(out);
}

std::set<Privilege> parse_privileges(const std::string& csv) {
  std::set<Privilege> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t next = csv.find(',', pos);
    std::string tok = csv.substr(pos, next == std::string::npos ? next : next - pos);
    if (!tok.empty()) {
      auto k = privilege_from_name(tok);
      if (!k) throw Error(ErrorCode::InvalidArgument, "unknown privilege: " + tok);
      out.insert(*k);
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no privileges given");
  return out;
}

std::set<std::string> parse_csv_set(const std::string& csv) {
  std::set<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t next = csv.find(',', pos);
    std::string tok = csv.substr(pos, next == std::string::npos ? next : next - pos);
    if (!tok.empty()) out.insert(tok);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

// Unix seconds, or YYYY-MM-DD interpreted as midnight UTC.
std::int64_t parse_timestamp(const std::string& text) {
  if (text.find('-') == std::string::npos)
    return std::stoll(text);
  std::tm tm{};
  if (sscanf(text.c_str(), "%d-%d-%d", &tm.tm_year, &tm.tm_mon, &tm.tm_mday) != 3)
    throw Error(ErrorCode::InvalidArgument, "bad timestamp: " + text);
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return static_cast<std::int64_t>(timegm(&tm));
}

Party parse_party(const std::string& name) {
  if (name == "DO") return Party::data_owner();
  if (name == "ESP") return Party::esp();
  if (name == "DSP") return Party::dsp();
  if (name == "SSP") return Party::ssp();
  if (name == "TA") return Party::ta();
  if (name.rfind("DR:", 0) == 0) return Party::dr(name.substr(3));
  throw Error(ErrorCode::InvalidArgument, "unknown party: " + name);
}

int cmd_setup(const GlobalOpts& g, bool force) {
  auto ta_path = ws_path(g, "ta-state.bin");
  if (std::filesystem::exists(ta_path) && !force)
    throw Error(ErrorCode::StorageError,
                "workspace already initialized (use --force to overwrite)");
  std::filesystem::create_directories(g.workspace);
  std::filesystem::create_directories(ws_path(g, "store"));
  std::filesystem::create_directories(ws_path(g, "dr"));

  auto rng = make_rng(g);
  auto [pk, mk] = setup(*rng);
  TaState ta;
  ta.pk = pk;
  ta.mk = mk;
  save_ta(g, ta);
  write_file(ws_path(g, "pk.bin"), encode_public_key(pk));
  std::cout << "workspace initialized at " << g.workspace << "\n";
  return 0;
}

int cmd_register_dr(const GlobalOpts& g, const std::string& dr_id) {
  require_simple_id(dr_id, "dr id");
  auto rng = make_rng(g);
  Harness h = make_harness(g, load_ta(g), *rng);
  load_all_dr_credentials(g, h);
  h.register_dr(dr_id);
  persist_dr_credentials(g, h, dr_id);
  save_ta(g, h.ta());
  dump_transcript(g, h);
  std::cout << "registered " << dr_id << "\n";
  return 0;
}

int cmd_encrypt(const GlobalOpts& g, const std::string& file_id, const std::string& in_path,
                std::string policy, const std::string& policy_file,
                const std::string& privileges) {
  require_simple_id(file_id, "file id");
  if (policy.empty() && !policy_file.empty()) {
    auto bytes = read_file(policy_file);
    policy.assign(bytes.begin(), bytes.end());
    while (!policy.empty() && (policy.back() == '\n' || policy.back() == '\r')) policy.pop_back();
  }
  if (policy.empty()) throw Error(ErrorCode::InvalidArgument, "no policy given");
  auto payload = read_file(in_path);

  auto rng = make_rng(g);
  Harness h = make_harness(g, load_ta(g), *rng);
  h.flow_outsource(file_id, payload, policy, parse_privileges(privileges));
  save_ta(g, h.ta());
  dump_transcript(g, h);
  std::cout << "stored " << file_id << " (" << payload.size() << " bytes, epoch "
            << h.store().epoch_of(file_id) << ")\n";
  return 0;
}

int cmd_grant(const GlobalOpts& g, const std::string& dr_id, const std::string& file_id,
              const std::string& privileges, const std::string& valid_until,
              const std::string& valid_from) {
  require_simple_id(dr_id, "dr id");
  require_simple_id(file_id, "file id");
  auto rng = make_rng(g);
  Harness h = make_harness(g, load_ta(g), *rng);
  ValidPeriod period;
  period.start = valid_from.empty() ? 0 : parse_timestamp(valid_from);
  period.end = parse_timestamp(valid_until);
  h.grant(dr_id, file_id, parse_privileges(privileges), period);
  save_ta(g, h.ta());
  std::cout << "granted " << privileges << " on " << file_id << " to " << dr_id << " until "
            << period.end << "\n";
  return 0;
}

int cmd_request(const GlobalOpts& g, const std::string& dr_id, const std::string& file_id,
                const std::string& privilege, const std::string& attrs,
                const std::string& out_path) {
  require_simple_id(dr_id, "dr id");
  auto k = privilege_from_name(privilege);
  if (!k) throw Error(ErrorCode::InvalidArgument, "unknown privilege: " + privilege);

  auto rng = make_rng(g);
  Harness h = make_harness(g, load_ta(g), *rng);
  load_all_dr_credentials(g, h);
  std::vector<std::uint8_t> payload;
  try {
    payload = h.flow_request(dr_id, file_id, *k, parse_csv_set(attrs));
  } catch (...) {
    save_ta(g, h.ta());  // auto-registration may have mutated the table
    persist_dr_credentials(g, h, dr_id);
    dump_transcript(g, h);
    throw;
  }
  save_ta(g, h.ta());
  persist_dr_credentials(g, h, dr_id);
  dump_transcript(g, h);
  write_file(out_path, payload);
  std::cout << "recovered " << payload.size() << " bytes to " << out_path << "\n";
  return 0;
}

int cmd_revoke(const GlobalOpts& g, const std::string& dr_id) {
  require_simple_id(dr_id, "dr id");
  auto rng = make_rng(g);
  Harness h = make_harness(g, load_ta(g), *rng);
  h.flow_revoke(dr_id);
  save_ta(g, h.ta());
  dump_transcript(g, h);
  std::cout << "revoked " << dr_id << "\n";
  return 0;
}

int cmd_audit(const GlobalOpts& g, const std::string& colluders_csv) {
  require_workspace(g);
  std::set<Party> colluders;
  for (const auto& name : parse_csv_set(colluders_csv)) colluders.insert(parse_party(name));
  if (colluders.empty()) throw Error(ErrorCode::InvalidArgument, "no colluders given");

  // Self-contained scripted scenario over a scratch store; the audit is
  // about the protocol, not the workspace contents.
  auto scratch = ws_path(g, "audit-scratch");
  std::filesystem::remove_all(scratch);
  SeededRandom rng(g.seed.value_or(0x617564697421ull));
  Harness::Config cfg;
  cfg.store_dir = scratch;
  std::int64_t now = g.now.value_or(1000);
  cfg.clock = [now] { return now; };
  Harness h = Harness::create(cfg, rng);

  std::vector<std::uint8_t> payload(64);
  rng.fill(payload);
  h.flow_outsource("audit-file", payload, "(role.analyst AND dept.cardio)",
                   {Privilege::Read, Privilege::Modify});
  h.register_dr("audit-dr");
  h.grant("audit-dr", "audit-file", {Privilege::Read}, {0, now + 1000});
  h.flow_request("audit-dr", "audit-file", Privilege::Read, {"role.analyst", "dept.cardio"});
  h.register_dr("audit-mole");
  h.grant("audit-mole", "audit-file", {Privilege::Read}, {0, now + 1000});
  h.flow_request("audit-mole", "audit-file", Privilege::Read, {"role.analyst", "dept.cardio"});
  h.flow_revoke("audit-mole");

  AuditReport report = h.collusion_audit(colluders);
  dump_transcript(g, h);
  std::filesystem::remove_all(scratch);

  nlohmann::json doc;
  doc["violations"] = report.violations;
  doc["by_design"] = report.by_design;
  doc["notes"] = report.notes;
  doc["clean"] = report.clean();
  std::cout << doc.dump(2) << "\n";
  return report.clean() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MC-ABE: outsourced attribute-based encryption with masking certificates"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--workspace,-w", g.workspace, "workspace directory")->envname("MCABE_WORKSPACE");
  std::uint64_t seed_val = 0;
  auto* seed_opt = app.add_option("--seed", seed_val, "deterministic randomness seed");
  std::int64_t now_val = 0;
  auto* now_opt = app.add_option("--now", now_val, "fixed clock (unix seconds)");

  auto* setup_cmd = app.add_subcommand("setup", "initialize a workspace");
  bool force = false;
  setup_cmd->add_flag("--force", force, "overwrite an existing workspace");

  auto* reg_cmd = app.add_subcommand("register-dr", "register a data requester");
  std::string dr_id;
  reg_cmd->add_option("--dr", dr_id, "data requester id")->required();

  auto* enc_cmd = app.add_subcommand("encrypt", "outsource an encrypted file");
  std::string file_id, in_path, policy, policy_file, privileges;
  enc_cmd->add_option("--file", file_id, "file id")->required();
  enc_cmd->add_option("--in", in_path, "payload path")->required();
  enc_cmd->add_option("--policy", policy, "policy text");
  enc_cmd->add_option("--policy-file", policy_file, "path to policy text");
  enc_cmd->add_option("--privileges", privileges, "comma list: read,modify,delete")->required();

  auto* grant_cmd = app.add_subcommand("grant", "grant file privileges to a DR");
  std::string g_dr, g_file, g_privs, g_until, g_from;
  grant_cmd->add_option("--dr", g_dr)->required();
  grant_cmd->add_option("--file", g_file)->required();
  grant_cmd->add_option("--privileges", g_privs)->required();
  grant_cmd->add_option("--valid-until", g_until, "unix seconds or YYYY-MM-DD")->required();
  grant_cmd->add_option("--valid-from", g_from, "unix seconds or YYYY-MM-DD (default 0)");

  auto* req_cmd = app.add_subcommand("request", "request and decrypt a file");
  std::string r_dr, r_file, r_priv, r_attrs, r_out;
  req_cmd->add_option("--dr", r_dr)->required();
  req_cmd->add_option("--file", r_file)->required();
  req_cmd->add_option("--privilege", r_priv)->required();
  req_cmd->add_option("--attrs", r_attrs, "comma list of attributes")->required();
  req_cmd->add_option("--out", r_out, "output path")->required();

  auto* rev_cmd = app.add_subcommand("revoke", "revoke a data requester");
  std::string rev_dr;
  rev_cmd->add_option("--dr", rev_dr)->required();

  auto* audit_cmd = app.add_subcommand("audit", "run the collusion audit scenario");
  std::string colluders;
  audit_cmd->add_option("--colluders", colluders, "comma list: DO,ESP,DSP,SSP,TA,DR:<id>")
      ->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) g.seed = seed_val;
  if (*now_opt) g.now = now_val;

  try {
    if (*setup_cmd) return cmd_setup(g, force);
    if (*reg_cmd) return cmd_register_dr(g, dr_id);
    if (*enc_cmd) return cmd_encrypt(g, file_id, in_path, policy, policy_file, privileges);
    if (*grant_cmd) return cmd_grant(g, g_dr, g_file, g_privs, g_until, g_from);
    if (*req_cmd) return cmd_request(g, r_dr, r_file, r_priv, r_attrs, r_out);
    if (*rev_cmd) return cmd_revoke(g, rev_dr);
    if (*audit_cmd) return cmd_audit(g, colluders);
  } catch (const mcabe::Error& e) {
    nlohmann::json diag = {{"error", error_code_name(e.code())}, {"detail", e.what()}};
    std::cerr << diag.dump() << "\n";
    return error_exit_code(e.code());
  } catch (const std::exception& e) {
    nlohmann::json diag = {{"error", "Internal"}, {"detail", e.what()}};
    std::cerr << diag.dump() << "\n";
    return 1;
  }
  return 0;
}
