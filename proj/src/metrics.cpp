#include "hostility/metrics.hpp"

#include <cstdio>

#include "json.hpp"

#include "hostility/errors.hpp"

namespace hostility {

namespace {

// ratio with the shared zero-division convention
double ratio(double num, double den, bool& flag) {
  if (den <= 0.0) {
    flag = true;
    return 0.0;
  }
  return num / den;
}

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.support = tp + fn;
  m.precision = ratio(static_cast<double>(tp), static_cast<double>(tp + fp), m.zero_division);
  m.recall = ratio(static_cast<double>(tp), static_cast<double>(tp + fn), m.zero_division);
  m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall, m.zero_division);
  return m;
}

std::vector<int> binarize(const std::vector<LabelSet>& sets, Label dim) {
  std::vector<int> out;
  out.reserve(sets.size());
  for (const LabelSet& ls : sets) out.push_back(ls.contains(dim) ? 1 : 0);
  return out;
}

void check_aligned(std::size_t gold, std::size_t pred) {
  if (gold != pred) {
    throw DataError("gold/pred length mismatch: " + std::to_string(gold) + " vs " +
                    std::to_string(pred));
  }
  if (gold == 0) throw DataError("cannot evaluate an empty sample list");
}

std::string fmt(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

void put(std::string& line, std::size_t col, const std::string& cell) {
  if (line.size() < col) line.resize(col, ' ');
  line += cell;
}

}  // namespace

BinaryReport binary_report(const std::vector<int>& gold, const std::vector<int>& pred) {
  check_aligned(gold.size(), pred.size());
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] != 0, p = pred[i] != 0;
    if (g && p) ++tp;
    else if (!g && p) ++fp;
    else if (g && !p) ++fn;
    else ++tn;
  }
  BinaryReport r;
  r.total = gold.size();
  r.pos = class_metrics(tp, fp, fn);
  r.neg = class_metrics(tn, fn, fp);  // swap roles: 0 is the positive class
  r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(r.total);
  return r;
}

double support_weighted_mean(const std::vector<double>& values,
                             const std::vector<std::size_t>& supports) {
  if (values.size() != supports.size()) {
    throw DataError("weighted mean needs one support per value");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += values[i] * static_cast<double>(supports[i]);
    den += static_cast<double>(supports[i]);
  }
  if (den <= 0.0) throw DataError("weighted mean undefined: all supports are zero");
  return num / den;
}

double coarse_f1(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred) {
  check_aligned(gold.size(), pred.size());
  std::vector<int> g, p;
  g.reserve(gold.size());
  p.reserve(pred.size());
  for (const LabelSet& ls : gold) g.push_back(ls.hostile() ? 1 : 0);
  for (const LabelSet& ls : pred) p.push_back(ls.hostile() ? 1 : 0);
  const BinaryReport r = binary_report(g, p);
  return support_weighted_mean({r.neg.f1, r.pos.f1}, {r.neg.support, r.pos.support});
}

FineF1 fine_f1(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred, Label dim) {
  const BinaryReport r = binary_report(binarize(gold, dim), binarize(pred, dim));
  FineF1 out;
  out.value = r.pos.f1;
  out.zero_support = r.pos.support == 0;
  return out;
}

double weighted_fine_f1(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred) {
  check_aligned(gold.size(), pred.size());
  std::vector<double> values;
  std::vector<std::size_t> supports;
  for (Label d : kHostileLabels) {
    values.push_back(fine_f1(gold, pred, d).value);
    std::size_t s = 0;
    for (const LabelSet& ls : gold) s += ls.contains(d) ? 1 : 0;
    supports.push_back(s);
  }
  try {
    return support_weighted_mean(values, supports);
  } catch (const DataError&) {
    throw DataError("weighted fine-grained F1 undefined: no gold hostile positives");
  }
}

std::string_view to_string(EvalScope s) {
  return s == EvalScope::end_to_end ? "end_to_end" : "second_level";
}

std::optional<EvalScope> parse_scope(std::string_view s) {
  if (s == "end_to_end") return EvalScope::end_to_end;
  if (s == "second_level") return EvalScope::second_level;
  return std::nullopt;
}

EvalReport evaluate(const std::vector<LabelSet>& gold, const std::vector<LabelSet>& pred,
                    EvalScope scope) {
  check_aligned(gold.size(), pred.size());
  std::vector<LabelSet> g, p;
  if (scope == EvalScope::second_level) {
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (gold[i].hostile()) {
        g.push_back(gold[i]);
        p.push_back(pred[i]);
      }
    }
    if (g.empty()) throw DataError("scope second_level: no gold-hostile samples");
  } else {
    g = gold;
    p = pred;
  }

  EvalReport report;
  report.scope = scope;
  report.total = g.size();
  report.coarse_report = binary_report(binarize(g, Label::non_hostile), binarize(p, Label::non_hostile));
  // the weighted mean over both classes is orientation-independent
  report.coarse = support_weighted_mean({report.coarse_report.neg.f1, report.coarse_report.pos.f1},
                                        {report.coarse_report.neg.support,
                                         report.coarse_report.pos.support});
  for (Label d : kHostileLabels) {
    const std::size_t k = static_cast<std::size_t>(d);
    report.fine_reports[k] = binary_report(binarize(g, d), binarize(p, d));
    report.fine[k].value = report.fine_reports[k].pos.f1;
    report.fine[k].zero_support = report.fine_reports[k].pos.support == 0;
  }
  report.weighted_fine = weighted_fine_f1(g, p);
  return report;
}

namespace {

// Display order and names follow the per-class report convention:
// the hostility row first, then the four dimensions.
struct TableRow {
  std::string name;
  const BinaryReport* report;
};

void render_report_rows(std::string& out, const std::string& name, const BinaryReport& r) {
  std::string line0, line1;
  put(line0, 0, name);
  put(line0, 14, "0");
  put(line0, 22, fmt(r.neg.precision, 2));
  put(line0, 33, fmt(r.neg.recall, 2));
  put(line0, 41, fmt(r.neg.f1, 2));
  put(line0, 51, std::to_string(r.neg.support));
  put(line0, 60, fmt(r.accuracy, 2));
  put(line1, 14, "1");
  put(line1, 22, fmt(r.pos.precision, 2));
  put(line1, 33, fmt(r.pos.recall, 2));
  put(line1, 41, fmt(r.pos.f1, 2));
  put(line1, 51, std::to_string(r.pos.support));
  out += line0 + "\n" + line1 + "\n";
}

}  // namespace

std::string render_table(const EvalReport& report) {
  static constexpr std::array<Label, 4> kDisplayOrder = {Label::defamation, Label::fake,
                                                         Label::hate, Label::offensive};
  static constexpr std::array<std::string_view, 5> kDisplayNames = {"Fake", "Hate", "Offensive",
                                                                    "Defamation", "Non-Hostile"};
  std::string out;
  {
    std::string header;
    put(header, 0, "Class");
    put(header, 14, "Binary");
    put(header, 22, "Precision");
    put(header, 33, "Recall");
    put(header, 41, "F1 score");
    put(header, 51, "Support");
    put(header, 60, "Accuracy");
    out += header + "\n";
  }
  render_report_rows(out, "Non-Hostile", report.coarse_report);
  for (Label d : kDisplayOrder) {
    const std::size_t k = static_cast<std::size_t>(d);
    render_report_rows(out, std::string(kDisplayNames[k]), report.fine_reports[k]);
  }
  out += "\n";
  auto summary_line = [&](std::string_view name, double v) {
    std::string line(name);
    put(line, 24, fmt(v, 4));
    out += line + "\n";
  };
  summary_line("Coarse Grained", report.coarse);
  for (Label d : kDisplayOrder) {
    const std::size_t k = static_cast<std::size_t>(d);
    summary_line(kDisplayNames[k], report.fine[k].value);
  }
  summary_line("Weighted Fine Grained", report.weighted_fine);
  out += "\n";
  std::string meta = "Scope: " + std::string(to_string(report.scope)) +
                     "   Samples: " + std::to_string(report.total);
  if (report.fallback_count) {
    meta += "   Fallback count: " + std::to_string(*report.fallback_count);
  }
  out += meta + "\n";
  for (Label d : kHostileLabels) {
    if (report.fine[static_cast<std::size_t>(d)].zero_support) {
      out += "note: no gold positives for " +
             std::string(kDisplayNames[static_cast<std::size_t>(d)]) + "; its F1 is reported as 0\n";
    }
  }
  return out;
}

namespace {

nlohmann::json class_json(const ClassMetrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"support", m.support},
          {"zero_division", m.zero_division}};
}

nlohmann::json report_json(const BinaryReport& r) {
  return {{"class_0", class_json(r.neg)},
          {"class_1", class_json(r.pos)},
          {"accuracy", r.accuracy},
          {"total", r.total}};
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["scope"] = std::string(to_string(report.scope));
  j["samples"] = report.total;
  j["coarse_f1"] = report.coarse;
  j["coarse_report"] = report_json(report.coarse_report);
  nlohmann::json fine;
  for (Label d : kHostileLabels) {
    const std::size_t k = static_cast<std::size_t>(d);
    fine[std::string(to_string(d))] = {{"f1", report.fine[k].value},
                                       {"zero_support", report.fine[k].zero_support},
                                       {"report", report_json(report.fine_reports[k])}};
  }
  j["fine"] = fine;
  j["weighted_fine_f1"] = report.weighted_fine;
  if (report.fallback_count) j["fallback_count"] = *report.fallback_count;
  return j.dump(2) + "\n";
}

}  // namespace hostility
