#include "record.hpp"

#include <cmath>

#include "errors.hpp"

namespace tsc {

const char* to_string(Label label) {
    switch (label) {
        case Label::Normal: return "Normal";
        case Label::Anomaly: return "Anomaly";
        case Label::Unknown: return "Unknown";
    }
    return "Unknown";
}

Label label_from_string(const std::string& text) {
    if (text == "Normal") return Label::Normal;
    if (text == "Anomaly") return Label::Anomaly;
    if (text == "Unknown") return Label::Unknown;
    fail_format("unknown label '" + text + "'");
}

void Record::validate() const {
    if (channels < 1) fail_invalid("record '" + id + "': channels must be >= 1");
    if (length < 2) fail_invalid("record '" + id + "': length must be >= 2");
    if (!(sampling_rate > 0.0)) fail_invalid("record '" + id + "': sampling rate must be positive");
    if (samples.size() != size_t(channels) * size_t(length))
        fail_invalid("record '" + id + "': sample buffer does not match channels*length");
    for (double v : samples) {
        if (!std::isfinite(v)) fail_numeric("record '" + id + "': non-finite sample");
    }
}

int Dataset::channels() const { return records.empty() ? 0 : records.front().channels; }
int Dataset::length() const { return records.empty() ? 0 : records.front().length; }
double Dataset::sampling_rate() const { return records.empty() ? 0.0 : records.front().sampling_rate; }

void Dataset::validate() const {
    if (records.empty()) fail_invalid("dataset is empty");
    const Record& first = records.front();
    for (size_t i = 0; i < records.size(); ++i) {
        const Record& r = records[i];
        r.validate();
        if (r.channels != first.channels || r.length != first.length ||
            r.sampling_rate != first.sampling_rate) {
            fail_invalid("dataset is not shape-uniform at record " + std::to_string(i));
        }
    }
}

}  // namespace tsc
