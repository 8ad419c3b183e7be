#include "rproj/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rproj/rng.hpp"

namespace rproj {
namespace {

void check_labels(const std::vector<int>& labels, int* num_classes) {
  int k = 0;
  for (int l : labels) {
    if (l < 1) throw std::invalid_argument("LabeledDataset: labels must be >= 1");
    k = std::max(k, l);
  }
  *num_classes = k;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool parse_double(std::string_view field, double* out) {
  field = trim(field);
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc{} && ptr == last;
}

bool parse_label(std::string_view field, long* out) {
  field = trim(field);
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc{} && ptr == last;
}

void split_fields(std::string_view line, std::vector<std::string_view>* fields) {
  fields->clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields->push_back(line.substr(start));
      return;
    }
    fields->push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

LabeledDataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<std::string_view> fields;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    split_fields(view, &fields);
    double probe = 0.0;
    if (rows.empty() && labels.empty() && !parse_double(fields[0], &probe)) continue;  // header
    if (width == 0) {
      if (fields.size() < 2)
        throw ParseError(path.string(), lineno, "need at least one value column and a label");
      width = fields.size();
    } else if (fields.size() != width) {
      throw ParseError(path.string(), lineno,
                       "expected " + std::to_string(width) + " fields, got " +
                           std::to_string(fields.size()));
    }
    std::vector<double> values(width - 1);
    for (std::size_t i = 0; i + 1 < width; ++i) {
      if (!parse_double(fields[i], &values[i]))
        throw ParseError(path.string(), lineno,
                         "field " + std::to_string(i + 1) + " is not a number");
    }
    long label = 0;
    if (!parse_label(fields[width - 1], &label) || label < 1)
      throw ParseError(path.string(), lineno, "final column must be a positive integer label");
    rows.push_back(std::move(values));
    labels.push_back(static_cast<int>(label));
  }
  if (rows.empty()) throw ParseError(path.string(), lineno, "no data rows");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width - 1));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j + 1 < width; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return LabeledDataset(std::move(m), std::move(labels), "file:" + path.string());
}

void save_csv(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  char buf[64];
  for (int i = 0; i < data.size(); ++i) {
    for (int j = 0; j < data.ambient_dim(); ++j) {
      const auto r = std::to_chars(buf, buf + sizeof buf, data.vectors()(i, j));
      out.write(buf, r.ptr - buf);
      out.put(',');
    }
    out << data.label(i) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

LabeledDataset load_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::uint64_t header[3] = {};
  if (!in.read(reinterpret_cast<char*>(header), sizeof header))
    throw ParseError(path.string(), 0, "truncated header");
  const std::uint64_t n_samples = header[0], dim = header[1], classes = header[2];
  if (dim == 0) throw ParseError(path.string(), 0, "ambient dimension is zero");
  if (n_samples > (1ULL << 32) || dim > (1ULL << 32))
    throw ParseError(path.string(), 0, "implausible header");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(dim));
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    std::vector<double> row(dim);
    if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(dim * 8)))
      throw ParseError(path.string(), 0, "truncated values at sample " + std::to_string(i));
    for (std::uint64_t j = 0; j < dim; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
  }
  std::vector<int> labels(n_samples);
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    std::int64_t l = 0;
    if (!in.read(reinterpret_cast<char*>(&l), sizeof l))
      throw ParseError(path.string(), 0, "truncated labels");
    if (l < 1 || (classes != 0 && l > static_cast<std::int64_t>(classes)))
      throw ParseError(path.string(), 0, "label out of range at sample " + std::to_string(i));
    labels[i] = static_cast<int>(l);
  }
  char extra;
  if (in.read(&extra, 1)) throw ParseError(path.string(), 0, "trailing bytes");
  if (n_samples == 0) return LabeledDataset::empty(static_cast<int>(dim), "file:" + path.string());
  return LabeledDataset(std::move(m), std::move(labels), "file:" + path.string());
}

void save_raw(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const std::uint64_t header[3] = {static_cast<std::uint64_t>(data.size()),
                                   static_cast<std::uint64_t>(data.ambient_dim()),
                                   static_cast<std::uint64_t>(data.num_classes())};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  std::vector<double> row(static_cast<std::size_t>(data.ambient_dim()));
  for (int i = 0; i < data.size(); ++i) {
    for (int j = 0; j < data.ambient_dim(); ++j) row[static_cast<std::size_t>(j)] = data.vectors()(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * 8));
  }
  for (int i = 0; i < data.size(); ++i) {
    const std::int64_t l = data.label(i);
    out.write(reinterpret_cast<const char*>(&l), sizeof l);
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

LabeledDataset::LabeledDataset(Eigen::MatrixXd vectors, std::vector<int> labels,
                               std::string provenance)
    : vectors_(std::move(vectors)), labels_(std::move(labels)), provenance_(std::move(provenance)) {
  if (static_cast<std::size_t>(vectors_.rows()) != labels_.size())
    throw std::invalid_argument("LabeledDataset: row/label count mismatch");
  ambient_dim_ = static_cast<int>(vectors_.cols());
  if (ambient_dim_ < 1) throw std::invalid_argument("LabeledDataset: ambient dimension must be positive");
  check_labels(labels_, &num_classes_);
}

LabeledDataset LabeledDataset::empty(int ambient_dim, std::string provenance) {
  if (ambient_dim < 1) throw std::invalid_argument("LabeledDataset: ambient dimension must be positive");
  LabeledDataset d;
  d.vectors_.resize(0, ambient_dim);
  d.ambient_dim_ = ambient_dim;
  d.provenance_ = std::move(provenance);
  return d;
}

std::vector<int> LabeledDataset::class_indices(int class_id) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (labels_[static_cast<std::size_t>(i)] == class_id) out.push_back(i);
  return out;
}

int LabeledDataset::class_count(int class_id) const {
  return static_cast<int>(std::count(labels_.begin(), labels_.end(), class_id));
}

LabeledDataset generate_union(int ambient_dim, int num_classes, const std::vector<int>& dims,
                              const std::vector<int>& counts, std::uint64_t seed,
                              double coeff_scale) {
  if (ambient_dim < 1) throw std::invalid_argument("generate_union: ambient dimension must be positive");
  if (num_classes < 1 || dims.size() != static_cast<std::size_t>(num_classes) ||
      counts.size() != static_cast<std::size_t>(num_classes))
    throw std::invalid_argument("generate_union: need one dim and one count per class");
  if (!(coeff_scale > 0.0)) throw std::invalid_argument("generate_union: coefficient scale must be positive");
  long total_dim = 0;
  long total_count = 0;
  for (int c = 0; c < num_classes; ++c) {
    const int d = dims[static_cast<std::size_t>(c)];
    const int cnt = counts[static_cast<std::size_t>(c)];
    if (d < 1) throw std::invalid_argument("generate_union: subspace dimensions must be positive");
    if (cnt < d)
      throw std::invalid_argument("generate_union: need at least dim samples per class for general position");
    total_dim += d;
    total_count += cnt;
  }
  if (total_dim > ambient_dim)
    throw std::invalid_argument("generate_union: total subspace dimension " +
                                std::to_string(total_dim) + " exceeds ambient dimension " +
                                std::to_string(ambient_dim));

  rng::Stream stream(seed);
  std::vector<SubspaceBasis> bases;
  bases.reserve(static_cast<std::size_t>(num_classes));
  Eigen::MatrixXd rows(total_count, ambient_dim);
  std::vector<int> labels(static_cast<std::size_t>(total_count));
  Eigen::Index row = 0;
  for (int c = 0; c < num_classes; ++c) {
    const int d = dims[static_cast<std::size_t>(c)];
    Eigen::MatrixXd g(ambient_dim, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < ambient_dim; ++i) g(i, j) = stream.next_normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(ambient_dim, d);
    bases.emplace_back(q);
    for (int s = 0; s < counts[static_cast<std::size_t>(c)]; ++s) {
      Eigen::VectorXd w(d);
      for (int j = 0; j < d; ++j) w(j) = coeff_scale * stream.next_normal();
      rows.row(row) = (q * w).transpose();
      labels[static_cast<std::size_t>(row)] = c + 1;
      ++row;
    }
  }

  std::ostringstream prov;
  prov << "generate_union(n=" << ambient_dim << ",K=" << num_classes << ",seed=" << seed << ")";
  LabeledDataset out(std::move(rows), std::move(labels), prov.str());
  if (!check_independence(std::span<const SubspaceBasis>(bases)))
    throw std::runtime_error("generate_union: sampled bases failed the independence check");
  out.attach_bases(std::move(bases));
  out.attach_margins(margin_report(out));
  return out;
}

LabeledDataset load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  return format == MatrixFormat::csv ? load_csv(path) : load_raw(path);
}

void save_matrix(const LabeledDataset& data, const std::filesystem::path& path,
                 MatrixFormat format) {
  if (format == MatrixFormat::csv)
    save_csv(data, path);
  else
    save_raw(data, path);
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data, double train_fraction,
                                                std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("split: train fraction must lie strictly in (0, 1)");
  std::vector<int> train_rows, test_rows;
  rng::Stream stream(rng::derive_seed(seed, 0x73706c69'74ULL));
  for (int c = 1; c <= data.num_classes(); ++c) {
    std::vector<int> idx = data.class_indices(c);
    const int n = static_cast<int>(idx.size());
    if (n < 2)
      throw std::invalid_argument("split: class " + std::to_string(c) +
                                  " has fewer than 2 samples");
    for (int i = n - 1; i > 0; --i)
      std::swap(idx[static_cast<std::size_t>(i)],
                idx[stream.next_below(static_cast<std::uint64_t>(i) + 1)]);
    int take = static_cast<int>(std::lround(train_fraction * n));
    take = std::clamp(take, 1, n - 1);
    std::vector<int> tr(idx.begin(), idx.begin() + take), te(idx.begin() + take, idx.end());
    std::sort(tr.begin(), tr.end());
    std::sort(te.begin(), te.end());
    train_rows.insert(train_rows.end(), tr.begin(), tr.end());
    test_rows.insert(test_rows.end(), te.begin(), te.end());
  }

  auto subset = [&](const std::vector<int>& rows, const char* tag) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), data.ambient_dim());
    std::vector<int> labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      m.row(static_cast<Eigen::Index>(i)) = data.vectors().row(rows[i]);
      labels[i] = data.label(rows[i]);
    }
    LabeledDataset out(std::move(m), std::move(labels), data.provenance() + tag);
    if (data.has_bases()) out.attach_bases(data.bases());
    return out;
  };
  return {subset(train_rows, "#train"), subset(test_rows, "#test")};
}

}  // namespace rproj
