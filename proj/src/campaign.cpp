#include "judgeattack/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "judgeattack/errors.hpp"
#include "judgeattack/objectives.hpp"

namespace judgeattack {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  fnv_bytes(h, bytes, 8);
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

InstanceOutcome fixed_suffix_outcome(const OrientedInstance& inst, std::vector<TokenId> suffix,
                                     const JudgeOracle& judge, const Vocabulary& vocab) {
  InstanceOutcome out;
  const JudgeOutput res = judge.evaluate(inst.triple, suffix, {});
  out.p_a = res.dist.p_a;
  out.p_b = res.dist.p_b;
  out.flipped = res.dist.decide() == Verdict::B;
  out.suffix_text = decode(suffix, vocab);
  out.suffix = std::move(suffix);
  return out;
}

InstanceOutcome attack_outcome(const AttackResult& r, const Vocabulary& vocab) {
  InstanceOutcome out;
  out.p_a = r.final_output.dist.p_a;
  out.p_b = r.final_output.dist.p_b;
  out.flipped = r.flipped;
  out.suffix = r.final_suffix.tokens;
  out.suffix_text = decode(out.suffix, vocab);
  out.iterations = r.iterations_used;
  out.trace = r.trace;
  return out;
}

struct PlannedInstance {
  std::size_t record_index = 0;
  std::optional<OrientedInstance> oriented;
  std::string error;  // orientation failure
};

std::vector<InstanceOutcome> run_instance(const CampaignConfig& config, const CampaignInputs& in,
                                          const GcgConfig& gcg, const PlannedInstance& plan) {
  const std::size_t index = plan.record_index;
  const JudgmentRecord& record = in.records[index];
  const auto& vocab = *in.vocab;
  const auto& judge = *in.judge;

  std::vector<Method> enabled;
  for (Method m : kAllMethods) {
    if (config.has(m)) enabled.push_back(m);
  }

  std::vector<InstanceOutcome> outcomes(enabled.size());
  auto stamp = [&](InstanceOutcome& o, Method m) {
    o.method = std::string(method_key(m));
    o.record_index = index;
    o.question_id = record.question_id;
  };

  if (!plan.oriented) {
    for (std::size_t k = 0; k < enabled.size(); ++k) {
      outcomes[k].ok = false;
      outcomes[k].error = "orientation failed: " + plan.error;
      stamp(outcomes[k], enabled[k]);
    }
    return outcomes;
  }
  const OrientedInstance& inst = *plan.oriented;

  auto stream = [&](Method m) {
    return derive_stream_seed(gcg.seed, record.question_id, index, method_key(m));
  };

  std::optional<AttackResult> cua;
  std::string cua_error;
  // CUA runs first so token_shuffle can reuse its suffix.
  std::vector<Method> order = enabled;
  std::stable_partition(order.begin(), order.end(), [](Method m) { return m == Method::Cua; });

  for (Method m : order) {
    const std::size_t k = static_cast<std::size_t>(std::find(enabled.begin(), enabled.end(), m) - enabled.begin());
    InstanceOutcome& o = outcomes[k];
    try {
      Rng rng(stream(m));
      switch (m) {
        case Method::RandomSuffix:
          o = fixed_suffix_outcome(inst, random_suffix(gcg.suffix_len, vocab, rng), judge, vocab);
          break;
        case Method::HardPrompt:
          o = fixed_suffix_outcome(inst, hard_prompt_suffix(in.prompts, vocab, rng), judge, vocab);
          break;
        case Method::TokenShuffle:
          if (!cua) throw EvaluationError("no CUA suffix to shuffle: " + cua_error);
          o = fixed_suffix_outcome(inst, token_shuffle(cua->final_suffix.tokens, rng), judge, vocab);
          break;
        case Method::Cua:
        case Method::Jma: {
          GcgConfig run = gcg;
          run.seed = stream(m);
          const ObjectiveSpec spec =
              m == Method::Cua ? ObjectiveSpec::cua() : ObjectiveSpec::jma(in.lexicons, config.jma_weights);
          AttackResult r = optimize(judge, inst.triple, spec, run, vocab);
          o = attack_outcome(r, vocab);
          if (m == Method::Cua) cua = std::move(r);
          break;
        }
      }
    } catch (const std::exception& e) {
      o = InstanceOutcome{};
      o.ok = false;
      o.error = e.what();
      if (m == Method::Cua) cua_error = e.what();
    }
    stamp(o, m);
    o.swapped = inst.swapped;
    o.clean_p_a = inst.clean.p_a;
    o.clean_p_b = inst.clean.p_b;
  }
  return outcomes;
}

}  // namespace

std::optional<OrientedInstance> orient_instance(const PromptTriple& triple, const JudgeOracle& judge) {
  OrientedInstance out;
  out.triple = triple;
  out.clean = judge.evaluate(triple, {}, {}).dist;
  if (out.clean.decide() == Verdict::A) return out;
  std::swap(out.triple.answer_a, out.triple.answer_b);
  out.triple.human_winner = triple.human_winner == Verdict::A ? Verdict::B : Verdict::A;
  out.swapped = true;
  out.clean = judge.evaluate(out.triple, {}, {}).dist;
  if (out.clean.decide() != Verdict::A) return std::nullopt;
  return out;
}

std::uint64_t derive_stream_seed(std::uint64_t campaign_seed, std::string_view question_id,
                                 std::size_t record_index, std::string_view method) {
  std::uint64_t h = kFnvOffset;
  fnv_u64(h, campaign_seed);
  fnv_u64(h, question_id.size());
  fnv_bytes(h, question_id.data(), question_id.size());
  fnv_u64(h, record_index);
  fnv_bytes(h, method.data(), method.size());
  return splitmix64(h);
}

CampaignInputs prepare_campaign(const CampaignConfig& config) {
  config.validate();
  CampaignInputs in;
  DatasetLoad data = load_dataset(config.dataset_path);
  in.stats.records_loaded = data.records.size();
  in.stats.ties_skipped = data.ties_skipped;
  in.stats.invalid_skipped = data.invalid_skipped;
  in.records = std::move(data.records);

  if (!config.hard_prompts_path.empty()) in.prompts = HardPromptPool::load(config.hard_prompts_path);

  if (!config.vocab_path.empty()) {
    in.vocab = std::make_shared<const Vocabulary>(load_vocab(config.vocab_path));
  } else {
    auto corpus = corpus_of(in.records);
    corpus.insert(corpus.end(), in.prompts.prompts().begin(), in.prompts.prompts().end());
    corpus.insert(corpus.end(), config.positive_markers.begin(), config.positive_markers.end());
    corpus.insert(corpus.end(), config.negative_markers.begin(), config.negative_markers.end());
    const auto reserved = default_reserved();
    in.vocab = std::make_shared<const Vocabulary>(build_vocab(corpus, reserved));
  }
  in.lexicons = encode_lexicons(config.positive_markers, config.negative_markers, *in.vocab);
  const auto lexicon = in.lexicons.all();

  ToyJudgeParams params;
  if (!config.judge.params_path.empty()) {
    params = load_params(config.judge.params_path);
    if (params.vocab_size != in.vocab->size()) {
      throw ConfigError("judge parameters cover " + std::to_string(params.vocab_size) +
                        " tokens but the vocabulary has " + std::to_string(in.vocab->size()));
    }
    for (TokenId t : lexicon) {
      if (params.marker_index(t) < 0) {
        throw ConfigError("judge parameters lack a marker head for '" + in.vocab->token(t) + "'");
      }
    }
  } else {
    params = new_toy_judge(config.judge.seed, config.judge.dim, *in.vocab, lexicon, config.judge.gamma);
  }
  if (config.judge.flat) params = flatten_heads(std::move(params));
  in.judge = std::make_shared<const ToyJudge>(std::move(params));

  config.gcg.clamped_to(*in.vocab).validate(*in.vocab);
  return in;
}

CampaignReport run_campaign(const CampaignConfig& config, const CampaignInputs& inputs, const ProgressFn& progress) {
  config.validate();
  const GcgConfig gcg = config.gcg.clamped_to(*inputs.vocab);
  gcg.validate(*inputs.vocab);

  // Orientation is cheap and decides which records are usable, so it runs
  // up front in record order; the limit counts attacked instances.
  const std::size_t limit = config.instance_limit < 0 ? inputs.records.size()
                                                      : static_cast<std::size_t>(config.instance_limit);
  std::vector<PlannedInstance> plans;
  std::size_t orientation_skipped = 0;
  for (std::size_t r = 0; r < inputs.records.size() && plans.size() < limit; ++r) {
    PlannedInstance plan;
    plan.record_index = r;
    try {
      plan.oriented = orient_instance(encode_record(inputs.records[r], *inputs.vocab), *inputs.judge);
      if (!plan.oriented) {
        ++orientation_skipped;
        continue;
      }
    } catch (const std::exception& e) {
      plan.error = e.what();
    }
    plans.push_back(std::move(plan));
  }
  const std::size_t n = plans.size();

  std::vector<std::vector<InstanceOutcome>> per_instance(n);
  std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      per_instance[i] = run_instance(config, inputs, gcg, plans[i]);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(++done, n);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  CampaignReport report;
  report.config = config.to_json();
  report.comparison_rows = config.comparison_rows;
  report.dataset = inputs.stats;
  report.dataset.orientation_skipped = orientation_skipped;
  report.dataset.instances_used = n;
  report.seeds.campaign_seed = config.gcg.seed;
  report.seeds.judge_seed = config.judge.seed;
  if (auto* toy = dynamic_cast<const ToyJudge*>(inputs.judge.get())) report.seeds.judge_seed = toy->params().seed;
  report.seeds.stream_derivation = "splitmix64(fnv1a64(campaign_seed, question_id, record_index, method))";

  std::size_t slot = 0;
  for (Method m : kAllMethods) {
    if (!config.has(m)) continue;
    MethodSummary s;
    s.method = std::string(method_key(m));
    for (std::size_t i = 0; i < n; ++i) {
      const InstanceOutcome& o = per_instance[i][slot];
      if (o.ok) {
        ++s.attempts;
        if (o.flipped) ++s.flips;
      } else {
        ++s.failures;
      }
      report.instances.push_back(o);
    }
    if (s.attempts > 0) s.asr = compute_asr(s.flips, s.attempts);
    report.methods.push_back(std::move(s));
    ++slot;
  }
  return report;
}

CampaignReport run_campaign(const CampaignConfig& config) {
  return run_campaign(config, prepare_campaign(config));
}

void write_report_files(const CampaignReport& report, const std::string& output_path) {
  namespace fs = std::filesystem;
  const fs::path dir(output_path);
  fs::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  write("report.json", emit_report(report, ReportFormat::Structured));
  write("report.csv", emit_report(report, ReportFormat::Csv));
  write("traces.csv", emit_trace_csv(report));
  write("table.txt", emit_report(report, ReportFormat::Table));
}

}  // namespace judgeattack
