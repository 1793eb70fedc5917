#include "stance/cross_validate.h"

#include <charconv>
#include <cstdio>
#include <future>
#include <sstream>

#include "json.hpp"
#include "stance/rng.h"
#include "stance/sampling.h"

namespace stance {
namespace {

using json = nlohmann::ordered_json;

struct FoldOutput {
  FoldResult result;
  std::vector<ScoredPrediction> predictions;
};

FoldOutput run_fold(const FoldSplit& fold, const std::map<std::string, Example>& examples,
                    const std::vector<Example>& aux, const ClassifierFactory& factory, const CvOptions& options) {
  std::unique_ptr<Classifier> model = factory();
  std::vector<Example> train;
  train.reserve(fold.train_ids.size() + aux.size());
  for (const auto& id : fold.train_ids) train.push_back(examples.at(id));
  train.insert(train.end(), aux.begin(), aux.end());
  if (model->wants_upsampling()) {
    Rng rng = Rng::derive(options.seed, "upsample", static_cast<std::uint64_t>(fold.fold_id));
    train = upsample(train, [](const Example& e) { return e.label; }, rng, kAllStances);
  }
  model->fit(train, mix_seed(options.seed ^ mix_seed(static_cast<std::uint64_t>(fold.fold_id) + 1)));

  FoldOutput out;
  out.result.fold_id = fold.fold_id;
  out.result.train_size = train.size();
  out.result.test_size = fold.test_ids.size();
  Rng rng = Rng::derive(options.seed, "predict", static_cast<std::uint64_t>(fold.fold_id));
  std::vector<Stance> golds;
  std::vector<Stance> preds;
  for (const auto& id : fold.test_ids) {
    const Example& ex = examples.at(id);
    ProbDist p = model->predict(ex, rng);
    golds.push_back(ex.label);
    preds.push_back(p.argmax());
    out.predictions.push_back({id, ex.label, p, fold.fold_id});
  }
  out.result.confusion = confusion(golds, preds);
  out.result.f1 = f1_report(out.result.confusion);
  if (model->probabilistic()) {
    double sum = 0.0;
    int defined = 0;
    for (Stance c : kAllStances) {
      auto scored = one_vs_all(out.predictions, c);
      const bool has_positive = std::any_of(scored.begin(), scored.end(), [](auto& s) { return s.positive; });
      if (!has_positive) continue;
      const double a = auc(pr_curve(scored));
      out.result.auc[static_cast<std::size_t>(index_of(c))] = a;
      sum += a;
      ++defined;
    }
    if (defined == kNumClasses) out.result.macro_auc = sum / kNumClasses;
  }
  return out;
}

std::string fmt(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("-"); }

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json calibration_json(const Calibration& c) {
  json j;
  j["class"] = std::string(to_string(c.stance));
  j["target_precision"] = c.target_precision;
  j["achieved"] = c.achieved;
  j["threshold"] = c.threshold;
  j["precision"] = c.precision;
  j["recall"] = c.recall;
  j["predicted_positive"] = c.predicted_positive;
  return j;
}

}  // namespace

std::vector<ScoredExample> one_vs_all(std::span<const ScoredPrediction> predictions, Stance c) {
  std::vector<ScoredExample> out;
  out.reserve(predictions.size());
  for (const auto& p : predictions) out.push_back({p.probs[c], p.gold == c});
  return out;
}

CvReport cross_validate(const Corpus& corpus, const ClassifierFactory& factory, const CvOptions& options) {
  const std::vector<std::string> ids = labeled_originals(corpus);
  std::map<std::string, Example> examples;
  for (const auto& id : ids) examples.emplace(id, make_example(corpus, id));
  std::vector<Example> aux;
  for (const auto& id : corpus.train_only()) {
    if (corpus.label(id)) aux.push_back(make_example(corpus, id));
  }
  const std::vector<FoldSplit> folds = make_folds(ids, options.seed, options.num_folds);

  std::vector<FoldOutput> outputs(folds.size());
  if (options.threads <= 1) {
    for (std::size_t i = 0; i < folds.size(); ++i) outputs[i] = run_fold(folds[i], examples, aux, factory, options);
  } else {
    std::size_t next = 0;
    while (next < folds.size()) {
      std::vector<std::future<FoldOutput>> running;
      for (int t = 0; t < options.threads && next < folds.size(); ++t, ++next) {
        running.push_back(std::async(std::launch::async, run_fold, std::cref(folds[next]), std::cref(examples),
                                     std::cref(aux), std::cref(factory), std::cref(options)));
      }
      const std::size_t base = next - running.size();
      for (std::size_t k = 0; k < running.size(); ++k) outputs[base + k] = running[k].get();
    }
  }

  CvReport report;
  {
    auto probe = factory();
    report.model = std::string(probe->name());
    report.probabilistic = probe->probabilistic();
  }
  std::array<double, kNumClasses> auc_sum{};
  std::array<int, kNumClasses> auc_n{};
  double macro_auc_sum = 0.0;
  int macro_auc_n = 0;
  for (auto& out : outputs) {
    for (int c = 0; c < kNumClasses; ++c) {
      report.mean_f1[c] += out.result.f1.per_class[c].f1;
      if (out.result.auc[c]) {
        auc_sum[c] += *out.result.auc[c];
        ++auc_n[c];
      }
    }
    report.mean_macro_f1 += out.result.f1.macro_f1;
    if (out.result.macro_auc) {
      macro_auc_sum += *out.result.macro_auc;
      ++macro_auc_n;
    }
    report.pooled_confusion += out.result.confusion;
    report.predictions.insert(report.predictions.end(), out.predictions.begin(), out.predictions.end());
    report.folds.push_back(std::move(out.result));
  }
  const double n = static_cast<double>(report.folds.size());
  for (int c = 0; c < kNumClasses; ++c) {
    report.mean_f1[c] /= n;
    if (auc_n[c] > 0) report.mean_auc[c] = auc_sum[c] / auc_n[c];
  }
  report.mean_macro_f1 /= n;
  if (macro_auc_n > 0) report.mean_macro_auc = macro_auc_sum / macro_auc_n;

  if (report.probabilistic) {
    for (Stance c : kAllStances) {
      auto scored = one_vs_all(report.predictions, c);
      if (std::any_of(scored.begin(), scored.end(), [](auto& s) { return s.positive; })) {
        report.pooled_curves[static_cast<std::size_t>(index_of(c))] = pr_curve(scored);
      }
    }
    for (Stance c : {Stance::kProRussian, Stance::kProUkrainian}) {
      report.calibrations.push_back(calibrate_threshold(one_vs_all(report.predictions, c), options.target_precision, c));
    }
  }
  return report;
}

std::string format_report(std::span<const CvReport> reports) {
  std::ostringstream out;
  for (const CvReport& r : reports) {
    out << "model " << r.model << "\n";
    out << "fold\ttrain\ttest\tF1_R\tF1_U\tF1_N\tmacroF1\tAUC_R\tAUC_U\tAUC_N\tmacroAUC\n";
    for (const FoldResult& f : r.folds) {
      out << f.fold_id << '\t' << f.train_size << '\t' << f.test_size;
      for (const auto& c : f.f1.per_class) out << '\t' << fmt(c.f1);
      out << '\t' << fmt(f.f1.macro_f1);
      for (const auto& a : f.auc) out << '\t' << fmt(a);
      out << '\t' << fmt(f.macro_auc) << '\n';
    }
    out << "mean\t-\t-";
    for (double v : r.mean_f1) out << '\t' << fmt(v);
    out << '\t' << fmt(r.mean_macro_f1);
    for (const auto& a : r.mean_auc) out << '\t' << fmt(a);
    out << '\t' << fmt(r.mean_macro_auc) << '\n';
    out << "pooled confusion (rows true, cols predicted: R U N)\n";
    for (Stance t : kAllStances) {
      out << to_string(t);
      for (Stance p : kAllStances) out << '\t' << r.pooled_confusion.at(t, p);
      out << '\n';
    }
    for (const Calibration& c : r.calibrations) {
      out << "calibration " << to_string(c.stance) << " target " << fmt(c.target_precision, 2) << ": ";
      if (c.achieved) {
        out << "threshold " << fmt(c.threshold, 6) << " precision " << fmt(c.precision) << " recall "
            << fmt(c.recall) << "\n";
      } else {
        out << "unachievable\n";
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string report_json(std::span<const CvReport> reports) {
  json root = json::array();
  for (const CvReport& r : reports) {
    json m;
    m["model"] = r.model;
    m["probabilistic"] = r.probabilistic;
    json folds = json::array();
    for (const FoldResult& f : r.folds) {
      json jf;
      jf["fold"] = f.fold_id;
      jf["train_size"] = f.train_size;
      jf["test_size"] = f.test_size;
      jf["macro_f1"] = f.f1.macro_f1;
      jf["macro_auc"] = opt_json(f.macro_auc);
      json per = json::object();
      for (Stance c : kAllStances) {
        const auto i = static_cast<std::size_t>(index_of(c));
        json jc;
        jc["precision"] = f.f1.per_class[i].precision;
        jc["recall"] = f.f1.per_class[i].recall;
        jc["f1"] = f.f1.per_class[i].f1;
        jc["auc"] = opt_json(f.auc[i]);
        per[std::string(to_string(c))] = jc;
      }
      jf["classes"] = per;
      jf["confusion"] = f.confusion.counts;
      folds.push_back(jf);
    }
    m["folds"] = folds;
    json summary;
    summary["macro_f1"] = r.mean_macro_f1;
    summary["macro_auc"] = opt_json(r.mean_macro_auc);
    for (Stance c : kAllStances) {
      const auto i = static_cast<std::size_t>(index_of(c));
      summary[std::string(to_string(c))] = {{"f1", r.mean_f1[i]}, {"auc", opt_json(r.mean_auc[i])}};
    }
    m["summary"] = summary;
    m["pooled_confusion"] = r.pooled_confusion.counts;
    json cal = json::array();
    for (const auto& c : r.calibrations) cal.push_back(calibration_json(c));
    m["calibrations"] = cal;
    root.push_back(m);
  }
  return root.dump(2) + "\n";
}

std::string format_curve(const PRCurve& curve) {
  std::string out;
  for (const PRPoint& p : curve.points) out += shortest(p.recall) + '\t' + shortest(p.precision) + '\n';
  return out;
}

std::string format_predictions(std::span<const ScoredPrediction> predictions) {
  std::string out;
  for (const auto& p : predictions) {
    out += p.id;
    for (double v : p.probs.probs) out += '\t' + shortest(v);
    out += '\n';
  }
  return out;
}

std::map<std::string, ProbDist> parse_predictions(std::string_view content) {
  std::map<std::string, ProbDist> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t s = 0;
    while (true) {
      std::size_t t = line.find('\t', s);
      f.push_back(line.substr(s, t == std::string_view::npos ? std::string_view::npos : t - s));
      if (t == std::string_view::npos) break;
      s = t + 1;
    }
    if (f.size() != 1 + kNumClasses || f[0].empty()) {
      throw ParseError("predictions line " + std::to_string(line_no) + ": expected id and 3 probabilities");
    }
    ProbDist d;
    for (int c = 0; c < kNumClasses; ++c) {
      std::string_view v = f[1 + static_cast<std::size_t>(c)];
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d.probs[static_cast<std::size_t>(c)]);
      if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ParseError("predictions line " + std::to_string(line_no) + ": bad probability '" + std::string(v) + "'");
      }
    }
    if (!out.emplace(std::string(f[0]), d).second) {
      throw ParseError("predictions line " + std::to_string(line_no) + ": duplicate id '" + std::string(f[0]) + "'");
    }
  }
  return out;
}

std::string calibrations_json(std::span<const Calibration> calibrations) {
  json arr = json::array();
  for (const auto& c : calibrations) arr.push_back(calibration_json(c));
  return arr.dump(2) + "\n";
}

std::vector<Calibration> parse_calibrations(std::string_view text) {
  json arr = json::parse(text, nullptr, false);
  if (!arr.is_array()) throw ParseError("calibration file: expected a JSON array");
  std::vector<Calibration> out;
  try {
    for (const auto& j : arr) {
      Calibration c;
      c.stance = stance_from_string(j.at("class").get<std::string>());
      c.target_precision = j.at("target_precision").get<double>();
      c.achieved = j.at("achieved").get<bool>();
      c.threshold = j.at("threshold").get<double>();
      c.precision = j.value("precision", 0.0);
      c.recall = j.value("recall", 0.0);
      c.predicted_positive = j.value("predicted_positive", std::int64_t{0});
      out.push_back(c);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("calibration file: ") + e.what());
  }
  return out;
}

}  // namespace stance
