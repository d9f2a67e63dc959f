#include "hmpp/intensity_tracker.hpp"

#include <cmath>
#include <string>

#include "hmpp/error.hpp"

namespace hmpp {

namespace {

double finite(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteIntensity, "intensity evaluation overflowed");
  return v;
}

}  // namespace

class IntensityTracker::Impl {
 public:
  Impl(const ModelSpec& model)
      : states_(model.states),
        events_(model.events.size()),
        state_(model.initial.origin_state()),
        count_(model.initial.records().size()) {
    if (!model.initial.empty()) state_ = model.initial.records().back().mark.state;
  }
  virtual ~Impl() = default;

  virtual double intensity(std::size_t e, double t) const = 0;
  virtual double bound(std::size_t e) const = 0;
  virtual double integral(std::size_t e, double a, double b) const = 0;
  virtual void on_push(const EventRecord& record) = 0;

  void push(const EventRecord& record) {
    if (!(record.time > anchor_)) {
      throw Error(ErrorCode::kNonIncreasingTimes, "tracker record does not follow the anchor");
    }
    on_push(record);
    anchor_ = record.time;
    state_ = record.mark.state;
    ++count_;
  }

  StateSpace states_;
  std::size_t events_;
  double anchor_ = 0.0;
  StateValue state_;
  std::size_t count_;
};

namespace {

class ConstantImpl final : public IntensityTracker::Impl {
 public:
  ConstantImpl(const ModelSpec& m) : Impl(m), rates_(m.functional.as_constant()->rates) {}
  double intensity(std::size_t e, double) const override { return rates_[e]; }
  double bound(std::size_t e) const override { return rates_[e]; }
  double integral(std::size_t e, double a, double b) const override { return rates_[e] * (b - a); }
  void on_push(const EventRecord&) override {}

 private:
  std::vector<double> rates_;
};

class MarkovImpl final : public IntensityTracker::Impl {
 public:
  MarkovImpl(const ModelSpec& m) : Impl(m), f_(*m.functional.as_markov()) { refresh(state_); }
  double intensity(std::size_t e, double) const override { return rate_ * f_.shares[e]; }
  double bound(std::size_t e) const override { return rate_ * f_.shares[e]; }
  double integral(std::size_t e, double a, double b) const override {
    return rate_ * f_.shares[e] * (b - a);
  }
  void on_push(const EventRecord& r) override { refresh(r.mark.state); }

 private:
  void refresh(const StateValue& x) { rate_ = finite(f_.rate(x)); }
  EventFunctional::MarkovRate f_;
  double rate_ = 0.0;
};

class CountImpl final : public IntensityTracker::Impl {
 public:
  CountImpl(const ModelSpec& m) : Impl(m), a_(m.functional.as_count()->a) { value_ = finite(a_(count_)); }
  double intensity(std::size_t, double) const override { return value_; }
  double bound(std::size_t) const override { return value_; }
  double integral(std::size_t, double a, double b) const override { return value_ * (b - a); }
  void on_push(const EventRecord&) override { value_ = finite(a_(count_ + 1)); }

 private:
  std::function<double(std::size_t)> a_;
  double value_ = 0.0;
};

// Excitation of target e at the anchor: sum_i alpha(m_i, e) * beta * exp(-beta (anchor - t_i)).
class ExponentialHawkesImpl final : public IntensityTracker::Impl {
 public:
  ExponentialHawkesImpl(const ModelSpec& m)
      : Impl(m),
        base_(m.functional.as_hawkes()->base),
        kernel_(*m.functional.as_hawkes()->kernel.as_exponential()),
        excitation_(events_, 0.0) {
    for (const auto& r : m.initial.records()) {
      for (std::size_t e = 0; e < events_; ++e) {
        excitation_[e] += jump(r.mark, e) * std::exp(-kernel_.beta * (0.0 - r.time));
      }
    }
  }

  double intensity(std::size_t e, double t) const override {
    return finite(base_[e] + excitation_[e] * std::exp(-kernel_.beta * (t - anchor_)));
  }
  double bound(std::size_t e) const override { return finite(base_[e] + excitation_[e]); }
  double integral(std::size_t e, double a, double b) const override {
    if (b <= a) return 0.0;
    const double decay_a = std::exp(-kernel_.beta * (a - anchor_));
    return base_[e] * (b - a) +
           excitation_[e] * decay_a * -std::expm1(-kernel_.beta * (b - a)) / kernel_.beta;
  }
  void on_push(const EventRecord& r) override {
    const double decay = std::exp(-kernel_.beta * (r.time - anchor_));
    for (std::size_t e = 0; e < events_; ++e) excitation_[e] = excitation_[e] * decay + jump(r.mark, e);
  }

 private:
  double jump(const Mark& m, std::size_t e) const {
    return kernel_.alpha.at(m.event, states_.slot_of(m.state), e) * kernel_.beta;
  }
  std::vector<double> base_;
  Kernel::Exponential kernel_;
  std::vector<double> excitation_;
};

class GenericHawkesImpl final : public IntensityTracker::Impl {
 public:
  GenericHawkesImpl(const ModelSpec& m)
      : Impl(m),
        base_(m.functional.as_hawkes()->base),
        kernel_(m.functional.as_hawkes()->kernel),
        records_(m.initial.records().begin(), m.initial.records().end()) {}

  double intensity(std::size_t e, double t) const override {
    double sum = base_[e];
    for (const auto& r : records_) sum += kernel_(t - r.time, r.mark, e, states_);
    return finite(sum);
  }
  double bound(std::size_t e) const override {
    double sum = base_[e];
    for (const auto& r : records_) sum += kernel_.sup_from(anchor_ - r.time, r.mark, e, states_);
    return finite(sum);
  }
  double integral(std::size_t e, double a, double b) const override {
    if (b <= a) return 0.0;
    double sum = base_[e] * (b - a);
    for (const auto& r : records_) sum += kernel_.integral(a - r.time, b - r.time, r.mark, e, states_);
    return finite(sum);
  }
  void on_push(const EventRecord& r) override { records_.push_back(r); }

 private:
  std::vector<double> base_;
  Kernel kernel_;
  std::vector<EventRecord> records_;
};

}  // namespace

IntensityTracker::IntensityTracker(const ModelSpec& model) {
  const auto& f = model.functional;
  if (f.as_constant()) {
    impl_ = std::make_unique<ConstantImpl>(model);
  } else if (f.as_markov()) {
    impl_ = std::make_unique<MarkovImpl>(model);
  } else if (f.as_count()) {
    impl_ = std::make_unique<CountImpl>(model);
  } else if (f.as_hawkes()->kernel.as_exponential()) {
    impl_ = std::make_unique<ExponentialHawkesImpl>(model);
  } else {
    impl_ = std::make_unique<GenericHawkesImpl>(model);
  }
}

IntensityTracker::~IntensityTracker() = default;
IntensityTracker::IntensityTracker(IntensityTracker&&) noexcept = default;
IntensityTracker& IntensityTracker::operator=(IntensityTracker&&) noexcept = default;

double IntensityTracker::anchor() const noexcept { return impl_->anchor_; }
const StateValue& IntensityTracker::state() const noexcept { return impl_->state_; }
std::size_t IntensityTracker::count() const noexcept { return impl_->count_; }

double IntensityTracker::intensity(std::size_t e, double t) const { return impl_->intensity(e, t); }

void IntensityTracker::bounds(std::span<double> out) const {
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = impl_->bound(e);
}

double IntensityTracker::integral(std::size_t e, double a, double b) const {
  return impl_->integral(e, a, b);
}

void IntensityTracker::push(const EventRecord& record) { impl_->push(record); }

}  // namespace hmpp
