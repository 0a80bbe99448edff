#pragma once
// Exact linear algebra: a dense matrix with reduced row echelon machinery
// (rank / kernel / solve) and an incremental sparse row space used for the
// larger ideal-closure computations.  All pivots are exact; there is no
// tolerance anywhere.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tpa {

// ---------------------------------------------------------------------------
// Dense matrix.  Column-vector convention: a linear map is `A * x`.
// ---------------------------------------------------------------------------
template <class K>
class Mat {
public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, K::zero()) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = K::one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const K& operator()(std::size_t r, std::size_t c) const {
    return a_[r * cols_ + c];
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Mat: shape mismatch");
    Mat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const K& aik = (*this)(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          const K& bkj = o(k, j);
          if (!bkj.is_zero()) r(i, j) += aik * bkj;
        }
      }
    return r;
  }

  Mat operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("Mat: shape mismatch");
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
  }

  Mat operator-(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("Mat: shape mismatch");
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
  }

  Mat scaled(const K& c) const {
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
    return r;
  }

  Mat transpose() const {
    Mat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  std::vector<K> apply(const std::vector<K>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("Mat: apply mismatch");
    std::vector<K> y(rows_, K::zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero() && !x[j].is_zero())
          y[i] += (*this)(i, j) * x[j];
    return y;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }

  // In-place reduced row echelon form; returns the pivot column list.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t pr = r;
      while (pr < rows_ && (*this)(pr, c).is_zero()) ++pr;
      if (pr == rows_) continue;
      if (pr != r)
        for (std::size_t j = 0; j < cols_; ++j)
          std::swap((*this)(pr, j), (*this)(r, j));
      K piv = (*this)(r, c).inv();
      for (std::size_t j = c; j < cols_; ++j) (*this)(r, j) *= piv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        K f = (*this)(i, c);
        if (f.is_zero()) continue;
        for (std::size_t j = c; j < cols_; ++j)
          (*this)(i, j) -= f * (*this)(r, j);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  std::size_t rank() const {
    Mat copy = *this;
    return copy.rref().size();
  }

  // Basis of the right kernel {x : A x = 0}, canonical (each basis vector has
  // value 1 at "its" free column and 0 at the other free columns).
  std::vector<std::vector<K>> kernel_basis() const {
    Mat rr = *this;
    std::vector<std::size_t> pivots = rr.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<K>> basis;
    for (std::size_t fc = 0; fc < cols_; ++fc) {
      if (is_pivot[fc]) continue;
      std::vector<K> v(cols_, K::zero());
      v[fc] = K::one();
      for (std::size_t pi = 0; pi < pivots.size(); ++pi)
        v[pivots[pi]] = -rr(pi, fc);
      basis.push_back(std::move(v));
    }
    return basis;
  }

  // One solution of A x = b, if any.
  std::optional<std::vector<K>> solve(const std::vector<K>& b) const {
    if (b.size() != rows_) throw std::invalid_argument("Mat: solve mismatch");
    Mat aug(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_) = b[i];
    }
    std::vector<std::size_t> pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
    std::vector<K> x(cols_, K::zero());
    for (std::size_t pi = 0; pi < pivots.size(); ++pi)
      x[pivots[pi]] = aug(pi, cols_);
    return x;
  }

  bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }

  std::optional<Mat> inverse() const {
    if (rows_ != cols_) return std::nullopt;
    Mat aug(rows_, 2 * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_ + i) = K::one();
    }
    auto pivots = aug.rref();
    if (pivots.size() != rows_ || pivots.back() != rows_ - 1) return std::nullopt;
    Mat inv(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
    return inv;
  }

  static Mat from_columns(const std::vector<std::vector<K>>& cols) {
    if (cols.empty()) return Mat(0, 0);
    Mat m(cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != m.rows())
        throw std::invalid_argument("Mat: ragged columns");
      for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static Mat from_rows(const std::vector<std::vector<K>>& rows) {
    if (rows.empty()) return Mat(0, 0);
    Mat m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols())
        throw std::invalid_argument("Mat: ragged rows");
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

private:
  std::size_t rows_, cols_;
  std::vector<K> a_;
};

// ---------------------------------------------------------------------------
// Sparse vectors: index/value pairs sorted by index, no zero values stored.
// ---------------------------------------------------------------------------
template <class K>
using SVec = std::vector<std::pair<std::size_t, K>>;

template <class K>
SVec<K> svec_from_dense(const std::vector<K>& v) {
  SVec<K> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s.emplace_back(i, v[i]);
  return s;
}

template <class K>
std::vector<K> svec_to_dense(const SVec<K>& s, std::size_t n) {
  std::vector<K> v(n, K::zero());
  for (const auto& [i, x] : s) v[i] = x;
  return v;
}

// r += c * s
template <class K>
void svec_axpy(SVec<K>& r, const K& c, const SVec<K>& s) {
  if (c.is_zero() || s.empty()) return;
  SVec<K> out;
  out.reserve(r.size() + s.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < s.size()) {
    if (j == s.size() || (i < r.size() && r[i].first < s[j].first)) {
      out.push_back(r[i++]);
    } else if (i == r.size() || s[j].first < r[i].first) {
      K val = c * s[j].second;
      if (!val.is_zero()) out.emplace_back(s[j].first, val);
      ++j;
    } else {
      K val = r[i].second + c * s[j].second;
      if (!val.is_zero()) out.emplace_back(r[i].first, val);
      ++i; ++j;
    }
  }
  r = std::move(out);
}

template <class K>
void svec_scale(SVec<K>& r, const K& c) {
  if (c.is_zero()) { r.clear(); return; }
  for (auto& [i, x] : r) x = x * c;
}

template <class K>
SVec<K> svec_unit(std::size_t i) {
  return SVec<K>{{i, K::one()}};
}

// ---------------------------------------------------------------------------
// RowSpace: an incrementally built, fully reduced row space over sparse
// vectors.  Supports rank queries, canonical reduction modulo the space, and
// (optionally) expressing members over the inserted generators.
// ---------------------------------------------------------------------------
template <class K>
class RowSpace {
public:
  explicit RowSpace(bool track_generators = false) : track_(track_generators) {}

  std::size_t rank() const { return rows_.size(); }

  const std::vector<SVec<K>>& rows() const { return rows_; }

  // Fully reduces v modulo the space (canonical representative).
  SVec<K> reduce(const SVec<K>& v) const {
    SVec<K> r = v;
    // Pivot indices are sorted inside pivot_to_row_, and reduction by a row
    // only introduces indices > its pivot, so one left-to-right sweep with
    // restart-free logic needs care; simplest correct loop: repeatedly find
    // the smallest remaining index that is a pivot and eliminate it.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [idx, val] : r) {
        auto it = pivot_to_row_.find(idx);
        if (it != pivot_to_row_.end()) {
          svec_axpy(r, -val, rows_[it->second]);
          changed = true;
          break;
        }
      }
    }
    return r;
  }

  bool contains(const SVec<K>& v) const { return reduce(v).empty(); }

  // Inserts v; returns true if the rank grew.  gen_index identifies v among
  // the inserted generators when tracking is on.
  bool insert(const SVec<K>& v) {
    SVec<K> r = v;
    std::vector<K> expr;  // combination over previously inserted generators
    if (track_) expr.assign(n_gens_, K::zero());
    // Reduce, tracking the combination.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [idx, val] : r) {
        auto it = pivot_to_row_.find(idx);
        if (it != pivot_to_row_.end()) {
          K c = val;
          svec_axpy(r, -c, rows_[it->second]);
          if (track_) {
            const auto& re = row_exprs_[it->second];
            for (std::size_t g = 0; g < re.size(); ++g)
              expr[g] -= c * re[g];
          }
          changed = true;
          break;
        }
      }
    }
    if (track_) {
      expr.push_back(K::one());  // coefficient of v itself
      ++n_gens_;
      for (auto& re : row_exprs_) re.push_back(K::zero());
    }
    if (r.empty()) return false;
    // Normalize to leading coefficient one.
    K lead = r.front().second;
    svec_scale(r, lead.inv());
    if (track_)
      for (auto& c : expr) c = c * lead.inv();
    std::size_t pivot = r.front().first;
    // Back-substitute into existing rows so the space stays fully reduced.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      K c = coeff_at(rows_[i], pivot);
      if (!c.is_zero()) {
        svec_axpy(rows_[i], -c, r);
        if (track_)
          for (std::size_t g = 0; g < row_exprs_[i].size(); ++g)
            row_exprs_[i][g] -= c * expr[g];
      }
    }
    pivot_to_row_[pivot] = rows_.size();
    rows_.push_back(std::move(r));
    if (track_) row_exprs_.push_back(std::move(expr));
    return true;
  }

  // If v lies in the space, returns its coefficients over the echelon rows.
  std::optional<std::vector<K>> coords(const SVec<K>& v) const {
    std::vector<K> cs(rows_.size(), K::zero());
    SVec<K> r = v;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [idx, val] : r) {
        auto it = pivot_to_row_.find(idx);
        if (it != pivot_to_row_.end()) {
          cs[it->second] += val;
          svec_axpy(r, -val, rows_[it->second]);
          changed = true;
          break;
        }
      }
    }
    if (!r.empty()) return std::nullopt;
    return cs;
  }

  // If v lies in the space, returns coefficients over the *inserted
  // generators* (requires tracking).
  std::optional<std::vector<K>> coords_in_generators(const SVec<K>& v) const {
    if (!track_) throw std::logic_error("RowSpace: tracking disabled");
    auto cs = coords(v);
    if (!cs) return std::nullopt;
    std::vector<K> out(n_gens_, K::zero());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t g = 0; g < row_exprs_[i].size(); ++g)
        out[g] += (*cs)[i] * row_exprs_[i][g];
    return out;
  }

  // Pivot indices, ascending.
  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> p;
    p.reserve(pivot_to_row_.size());
    for (const auto& [c, r] : pivot_to_row_) p.push_back(c);
    return p;
  }

  bool has_pivot(std::size_t idx) const { return pivot_to_row_.count(idx) > 0; }

private:
  static K coeff_at(const SVec<K>& v, std::size_t idx) {
    auto it = std::lower_bound(
        v.begin(), v.end(), idx,
        [](const std::pair<std::size_t, K>& e, std::size_t i) {
          return e.first < i;
        });
    if (it != v.end() && it->first == idx) return it->second;
    return K::zero();
  }

  bool track_;
  std::size_t n_gens_ = 0;
  std::vector<SVec<K>> rows_;
  std::vector<std::vector<K>> row_exprs_;
  std::map<std::size_t, std::size_t> pivot_to_row_;
};

}  // namespace tpa
