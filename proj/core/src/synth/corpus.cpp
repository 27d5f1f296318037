#include "locflow/synth/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "locflow/common/atomic_file.hpp"
#include "locflow/common/digest.hpp"
#include "locflow/common/random.hpp"
#include "locflow/context/porter_stemmer.hpp"

namespace locflow::synth {

using capture::FourTuple;
using capture::TcpFrameSpec;
using pipeline::FlowClass;
using pipeline::InstanceVerdict;

namespace {

constexpr std::uint8_t kSyn = 0x02, kSynAck = 0x12, kAck = 0x10, kPshAck = 0x18, kFinAck = 0x11;

struct AppTopic {
  const char* topic;  // key in the topic config, or nullptr for a market-only app
  const char* market;
  bool location;
  std::vector<const char*> description;
  std::vector<const char*> name_words;
  std::vector<std::vector<const char*>> windows;  // main windows
};

const std::vector<AppTopic>& app_topics() {
  static const std::vector<AppTopic> topics = {
      {"navigation and travel", "Travel & Local", true,
       {"map", "track", "gps", "travel", "city", "route", "information", "navigation"},
       {"map", "gps", "travel", "route", "go", "trip"},
       {{"Map", "Route to destination", "Nearby places", "Distance 3 km"},
        {"Search places", "Directions", "Traffic", "Current location"},
        {"Trip planner", "Hotels nearby", "City guide"}}},
      {"weather and stars", "Weather", true,
       {"weather", "forecast", "temperature", "city", "locate", "light", "rain"},
       {"weather", "local", "sky", "rain", "sun"},
       {{"Weather", "Today 72F", "PM2.5 35", "Forecast", "Time 10:32 PM"},
        {"Local weather", "Humidity 40%", "Wind 5 mph", "PM 2.5 good"},
        {"Temperature", "Sunny", "Tomorrow", "Weekly forecast"}}},
      {"health", "Health & Fitness", false,
       {"weight", "body", "exercise", "diet", "workout", "medical"},
       {"fit", "diet", "health", "body", "gym"},
       {{"Workout", "Calories 320", "Steps today"}, {"Diet plan", "Water intake", "Body weight"}}},
      {"games and cheat sheets", "Games", false,
       {"game", "level", "puzzle", "play", "score", "cheat"},
       {"puzzle", "game", "pop", "jump", "candy"},
       {{"Level 3", "Score 1200", "Play", "Pause"}, {"High score", "Coins 45", "Start game"}}},
      {"music", "Music & Audio", false,
       {"music", "song", "playlist", "album", "artist", "radio"},
       {"music", "song", "radio", "beat", "tune"},
       {{"Playlist", "Now playing", "Album", "Shuffle"}, {"Radio stations", "Top songs", "Artist"}}},
      {"personalize", "Personalization", false,
       {"wallpaper", "theme", "icon", "launcher", "custom"},
       {"theme", "wall", "icon", "cool", "pretty"},
       {{"Themes", "Apply", "Wallpaper gallery"}, {"Icon pack", "Download theme", "Preview"}}},
      {nullptr, "Tools", false,
       {"bright", "torch", "battery", "simple", "switch"},
       {"super", "led", "torch", "flash", "bright"},
       {{"Flashlight", "On", "Brightness", "Strobe"}, {"Battery saver", "Toggle", "Screen light"}}},
  };
  return topics;
}

const std::vector<std::vector<const char*>>& secondary_windows() {
  static const std::vector<std::vector<const char*>> w = {
      {"Settings", "Notifications", "About", "Version 2.1"},
      {"Rate this app", "Share with friends", "Feedback"},
      {"Sign in", "Password", "Forgot password"},
  };
  return w;
}

const std::vector<const char*>& filler_words() {
  static const std::vector<const char*> w = {"best", "free", "simple", "fast", "daily", "easy", "new", "popular",
                                             "beautiful", "smart", "friends", "share"};
  return w;
}

const std::vector<const char*>& city_names() {
  static const std::vector<const char*> c = {"Davis",  "Sacramento", "Beijing", "Shanghai", "New York", "London",
                                             "Paris",  "Tokyo",      "Berlin",  "Chicago",  "Seattle",  "Austin"};
  return c;
}

const std::vector<const char*>& name_prefixes() {
  static const std::vector<const char*> p = {"super", "my", "smart", "easy", "pro", "free", "local", "happy"};
  return p;
}

// Ad and analytics hosts; the first `listed` of them (after shuffling) go to the hostlist.
const std::vector<const char*>& ad_hosts() {
  static const std::vector<const char*> h = {
      "ads.appsgeyser.com", "ad.adwhirl.com",   "api.mobclix.com",       "data.flurry.com",
      "alog.umeng.com",     "ads.mopub.com",    "sdk.inmobi.com",        "adx.admob.cn",
      "ws.tapjoyads.com",   "a.applovin.com",   "track.adcolony.com",    "log.domob.cn"};
  return h;
}

const std::vector<const char*>& cdn_hosts() {
  static const std::vector<const char*> h = {"static.cdnhub.net", "img.fastimg.com", "cdn.mediaedge.net",
                                             "fonts.webstatic.com", "update.appstore.cn"};
  return h;
}

struct Generator {
  const SynthConfig& config;
  Rng rng;
  SynthCorpus corpus;
  std::vector<std::string> ads;
  std::set<std::string> listed_ads;

  explicit Generator(const SynthConfig& c) : config(c), rng(derive_seed(c.seed, 0x5e7)) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform_below(rng, n)); }
  double unit() { return uniform_unit(rng); }
  bool chance(double p) { return unit() < p; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  double exponential(double mean) { return -mean * std::log(1.0 - unit()); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

  std::string hex(std::size_t digits) {
    static const char* kHex = "0123456789abcdef";
    std::string s;
    for (std::size_t i = 0; i < digits; ++i) s.push_back(kHex[below(16)]);
    return s;
  }

  static std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
  }

  static std::string server_ip(const std::string& host) {
    const auto h = fnv1a(host);
    return "93." + std::to_string(1 + h % 250) + "." + std::to_string(1 + (h >> 8) % 250) + "." +
           std::to_string(1 + (h >> 16) % 250);
  }

  // ---- contexts -------------------------------------------------------------

  struct App {
    std::string id;
    std::string name;
    std::string host_word;
    const AppTopic* topic;
    bool leaky;  // shares location even where the user would not expect it
  };

  App make_app(std::size_t index, std::set<std::string>& names) {
    const auto& topics = app_topics();
    const AppTopic* topic = chance(0.4) ? &topics[below(2)] : &topics[2 + below(topics.size() - 2)];
    std::string name;
    do {
      std::string a = pick(name_prefixes()), b = pick(topic->name_words);
      if (chance(0.5)) std::swap(a, b);
      a[0] = static_cast<char>(std::toupper(a[0]));
      b[0] = static_cast<char>(std::toupper(b[0]));
      name = a + b;
      if (names.count(name)) name += std::to_string(index);
    } while (names.count(name));
    names.insert(name);
    std::string host;
    for (char ch : name) host.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    char id[16];
    std::snprintf(id, sizeof id, "app%03zu", index);
    return {id, name, host, topic, chance(0.7)};
  }

  std::string description(const AppTopic& topic) {
    std::vector<std::string> words;
    auto own = topic.description;
    for (std::size_t i = own.size(); i > 1; --i) std::swap(own[i - 1], own[below(i)]);
    const std::size_t hits = 3 + below(3);
    for (std::size_t i = 0; i < hits && i < own.size(); ++i) words.emplace_back(own[i]);
    if (chance(0.3)) words.emplace_back(pick(pick(app_topics()).description));  // a stray keyword
    for (std::size_t i = 0, n = 2 + below(4); i < n; ++i) words.emplace_back(pick(filler_words()));
    for (std::size_t i = words.size(); i > 1; --i) std::swap(words[i - 1], words[below(i)]);
    std::string out = "The";
    for (const auto& w : words) out += " " + w;
    return out + " app.";
  }

  // ---- traffic --------------------------------------------------------------

  struct Shape {
    double rtt_lo, rtt_hi;
    double think_lo, think_hi;
    std::size_t down_lo, down_hi;
    double gap_mean;      // ms between response packets
    double linger_lo, linger_hi;  // ms before the client closes
    bool big_first;       // first response packet is a full segment
    double down_size_lo, down_size_hi;
  };

  static Shape shape(FlowClass cls) {
    switch (cls) {
      case FlowClass::non_loc:
        return {20, 80, 20, 150, 15, 70, 4.0, 5, 200, false, 1460, 1460};
      case FlowClass::legal_loc:
        return {40, 150, 300, 1500, 1, 3, 60.0, 500, 3000, false, 150, 700};
      case FlowClass::illegal_loc:
        return {20, 80, 30, 200, 2, 6, 10.0, 5, 300, true, 200, 1460};
    }
    return shape(FlowClass::non_loc);
  }

  std::uint16_t next_port(const std::string& device) {
    auto& p = ports_[device];
    if (p == 0 || p >= 65000) p = 40000;
    return p++;
  }

  struct Emitted {
    double start;
    double end;
  };

  // Emits one TCP connection carrying `requests`; times are whole microseconds.
  Emitted emit_flow(const FourTuple& key, double start, FlowClass traffic, const std::vector<std::string>& requests,
                    std::uint32_t body_len) {
    const Shape s = shape(traffic);
    const auto tick = [](double t) { return std::round(t * 1e6) / 1e6; };
    double t = tick(start);
    const FourTuple up = key, down = key.reversed();
    auto frame = [&](const FourTuple& tuple, std::uint8_t flags, std::string payload, std::uint32_t len) {
      corpus.frames.push_back({tick(t), tuple, flags, std::move(payload), len});
    };
    const Emitted out{tick(t), 0.0};
    frame(up, kSyn, "", 0);
    t += uniform(s.rtt_lo, s.rtt_hi) / 1000.0;
    frame(down, kSynAck, "", 0);
    t += uniform(0.2, 2.0) / 1000.0;
    frame(up, kAck, "", 0);
    for (std::size_t r = 0; r < requests.size(); ++r) {
      if (r > 0) t += uniform(100, 2000) / 1000.0;
      t += uniform(0.5, 5) / 1000.0;
      frame(up, kPshAck, requests[r], static_cast<std::uint32_t>(requests[r].size()) + body_len);
      t += uniform(s.think_lo, s.think_hi) / 1000.0;
      const std::size_t n = s.down_lo + below(s.down_hi - s.down_lo + 1);
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) t += (0.3 + exponential(s.gap_mean)) / 1000.0;
        std::uint32_t len;
        if (i == 0 && s.big_first) len = 1460;
        else if (traffic == FlowClass::non_loc && i + 1 < n) len = 1460;
        else len = static_cast<std::uint32_t>(uniform(s.down_size_lo, s.down_size_hi));
        std::string header;
        if (i == 0) {
          header = "HTTP/1.1 200 OK\r\nContent-Type: application/octet-stream\r\n\r\n";
          if (header.size() > len) header.resize(len);
        }
        frame(down, kPshAck, std::move(header), len);
        if (i % 2 == 1 || i + 1 == n) {
          t += uniform(0.2, 3) / 1000.0;
          frame(up, kAck, "", 0);
        }
      }
    }
    t += uniform(s.linger_lo, s.linger_hi) / 1000.0;
    frame(up, kFinAck, "", 0);
    t += uniform(s.rtt_lo, s.rtt_hi) / 1000.0;
    frame(down, kFinAck, "", 0);
    t += uniform(0.2, 2.0) / 1000.0;
    frame(up, kAck, "", 0);
    return {out.start, tick(t)};
  }

  static std::string request_text(const std::string& method, const std::string& host, const std::string& path) {
    std::string r = method + " " + path + " HTTP/1.1\r\nHost: " + host +
                    "\r\nUser-Agent: Dalvik/2.1.0 (Linux; U; Android 6.0.1)\r\nAccept-Encoding: gzip\r\n";
    if (method == "POST") r += "Content-Type: application/x-www-form-urlencoded\r\n";
    return r + "Connection: keep-alive\r\n\r\n";
  }

  std::pair<std::string, std::string> coords() {
    return {fmt("%.6f", uniform(-55, 65)), fmt("%.6f", uniform(-179, 179))};
  }

  struct Request {
    std::string method, host, path;
  };

  Request legal_request(const App& app, bool with_coords) {
    const auto [lat, lon] = coords();
    const bool weather = app.topic->topic && std::string(app.topic->topic) == "weather and stars";
    const std::string own = "api." + app.host_word + ".com";
    if (!with_coords) {
      return weather ? Request{"POST", chance(0.5) ? own : "v.juhe.cn", "/weather/locate"}
                     : Request{"POST", chance(0.5) ? own : "api.map.baidu.com", "/location/report"};
    }
    if (weather) {
      switch (below(3)) {
        case 0:
          return {"GET", "v.juhe.cn", "/weather/geo?&lon=" + lon + "&lat=" + lat};
        case 1:
          return {"GET", own, "/forecast/daily?lat=" + lat + "&lng=" + lon + "&units=metric"};
        default:
          return {"GET", "api.weather.com", "/v2/weather/now?location=" + lat + "," + lon};
      }
    }
    switch (below(3)) {
      case 0:
        return {"GET", "api.map.baidu.com", "/place/search?query=coffee&location=" + lat + "," + lon + "&radius=1000"};
      case 1:
        return {"GET", own, "/map/tile?lat=" + lat + "&lng=" + lon + "&zoom=14"};
      default:
        return {"GET", own, "/route/plan?origin=" + lat + "," + lon + "&mode=walk"};
    }
  }

  Request illegal_request(const App& app, bool with_coords, bool own_host) {
    const auto [lat, lon] = coords();
    const std::string host = own_host ? "api." + app.host_word + ".com" : ads[below(ads.size())];
    if (!with_coords) {
      return chance(0.5) ? Request{"POST", host, "/ads/request?uid=" + hex(8) + "&sdk=4.2"}
                         : Request{"POST", host, "/track/event?e=open&uid=" + hex(8)};
    }
    switch (below(3)) {
      case 0:
        return {"GET", host, "/?&guid=" + hex(8) + "&tlat=" + lat + "&tlon=" + lon + "&p=android&test=1"};
      case 1:
        return {"GET", host, "/getad?slot=" + std::to_string(below(90) + 10) + "&lat=" + lat + "&lng=" + lon +
                                 "&imei=" + hex(15)};
      default:
        return {"GET", host, "/v1/collect?uid=" + hex(12) + "&loc=" + lat + "," + lon + "&ts=" +
                                 std::to_string(1500000000 + below(10000000))};
    }
  }

  Request plain_request(const App& app) {
    const std::string own = app.host_word;
    switch (below(6)) {
      case 0:
        return {"GET", "img." + own + ".com", "/images/banner_" + std::to_string(below(900)) + ".jpg"};
      case 1:
        return {"GET", pick(cdn_hosts()), "/static/js/app." + hex(8) + ".js"};
      case 2:
        return {"GET", "api." + own + ".com", "/api/feed?page=" + std::to_string(1 + below(9))};
      case 3:
        return {"GET", pick(cdn_hosts()), "/avatar/" + std::to_string(below(100000)) + ".png"};
      case 4:
        return {"GET", "update." + own + ".com", "/update/check?ver=" + std::to_string(100 + below(400))};
      default:
        return {"GET", pick(cdn_hosts()), "/media/" + hex(10) + ".mp3"};
    }
  }

  void add_flow(const App& app, const std::string& instance, const std::string& device, double start, FlowClass truth,
                bool location) {
    const bool with_coords = location && chance(config.coordinate_fraction);
    Request req;
    if (!location) {
      req = plain_request(app);
    } else if (truth == FlowClass::legal_loc) {
      req = legal_request(app, with_coords);
    } else {
      req = illegal_request(app, with_coords, pending_own_host_);
    }
    pending_own_host_ = false;

    // A minority of flows borrow another class's timing to keep the classes overlapping.
    FlowClass traffic = truth;
    if (chance(0.08)) traffic = static_cast<FlowClass>(below(3));

    std::vector<std::string> requests{request_text(req.method, req.host, req.path)};
    if (!location && chance(0.3)) {
      const auto more = plain_request(app);
      requests.push_back(request_text(more.method, req.host, more.path));
    }
    const FourTuple key{device, next_port(device), server_ip(req.host), 80};
    const auto span = emit_flow(key, start, traffic, requests, req.method == "POST" ? static_cast<std::uint32_t>(40 + below(200)) : 0u);

    capture::FlowAnnotation a;
    a.key = key;
    a.t_start = span.start - 0.001;
    a.t_end = span.end + 0.001;
    a.instance_id = instance;
    if (!location) a.taint_location = false;
    else if (!with_coords || chance(0.5)) a.taint_location = true;
    corpus.annotations.push_back(std::move(a));

    capture::HttpFlow probe;
    probe.key = key;
    probe.packets.push_back({});
    probe.packets.back().timestamp = span.start;
    corpus.ground_truth.push_back({probe.id(), truth});
  }

  void run() {
    corpus.topics = default_topics();
    for (const auto* h : ad_hosts()) ads.emplace_back(h);
    {
      auto shuffled = ads;
      for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[below(i)]);
      const auto listed = static_cast<std::size_t>(std::llround(config.hostlist_coverage * static_cast<double>(shuffled.size())));
      std::string text = "# ad and analytics servers\n";
      for (std::size_t i = 0; i < listed && i < shuffled.size(); ++i) {
        listed_ads.insert(shuffled[i]);
      }
      for (const auto& h : listed_ads) text += h + "\n";
      corpus.hostlist_text = text;
    }

    std::set<std::string> names;
    double clock = 1500000000.0;
    for (std::size_t a = 0; a < config.apps; ++a) {
      const App app = make_app(a, names);
      const std::string device = "10.0." + std::to_string(a / 250) + "." + std::to_string(2 + a % 250);
      corpus.device_ips.insert(device);
      const std::string desc = description(*app.topic);

      for (std::size_t w = 0; w < config.instances_per_app; ++w) {
        context::AppContext ctx;
        ctx.instance_id = app.id + "#w" + std::to_string(w + 1);
        ctx.app_name = app.name;
        ctx.description = desc;
        ctx.market_category = app.topic->market;

        bool expected;
        const bool main_window = w == 0 || chance(0.8);
        if (chance(config.ambiguous_fraction)) {
          // The window belongs to the other kind of app; the intention is a coin flip.
          const auto& other = app.topic->location ? app_topics()[2 + below(app_topics().size() - 2)] : app_topics()[below(2)];
          for (const auto* t : pick(other.windows)) ctx.ui_texts.emplace_back(t);
          if (!app.topic->location && chance(0.5)) ctx.clickable_labels.emplace_back(pick(city_names()));
          expected = chance(0.5);
        } else if (main_window) {
          for (const auto* t : pick(app.topic->windows)) ctx.ui_texts.emplace_back(t);
          if (app.topic->location && chance(0.6)) ctx.clickable_labels.emplace_back(pick(city_names()));
          expected = app.topic->location;
        } else {
          for (const auto* t : pick(secondary_windows())) ctx.ui_texts.emplace_back(t);
          expected = false;
        }
        ctx.clickable_labels.emplace_back(chance(0.5) ? "OK" : "Back");

        const auto verdict = expected ? InstanceVerdict::expected : InstanceVerdict::unexpected;
        corpus.true_intentions.push_back({ctx.instance_id, verdict});
        if (chance(config.labelled_fraction)) corpus.training_labels.push_back({ctx.instance_id, verdict});

        const double base = clock;
        clock += 90.0;
        auto at = [&] { return base + uniform(0.0, 40.0); };
        for (std::size_t i = 0, n = 2 + below(3); i < n; ++i) add_flow(app, ctx.instance_id, device, at(), FlowClass::non_loc, false);
        if (expected) {
          for (std::size_t i = 0, n = 1 + below(2); i < n; ++i) {
            if (chance(config.mislabel_fraction)) {
              pending_own_host_ = true;
              add_flow(app, ctx.instance_id, device, at(), FlowClass::illegal_loc, true);
            } else {
              add_flow(app, ctx.instance_id, device, at(), FlowClass::legal_loc, true);
            }
          }
          if (chance(0.35)) add_flow(app, ctx.instance_id, device, at(), FlowClass::illegal_loc, true);
        } else if (app.leaky || (app.topic->location && chance(0.8))) {
          for (std::size_t i = 0, n = 1 + below(2); i < n; ++i) {
            pending_own_host_ = chance(0.25);
            add_flow(app, ctx.instance_id, device, at(), FlowClass::illegal_loc, true);
          }
        }
        corpus.contexts.push_back(std::move(ctx));
      }
    }
    std::stable_sort(corpus.frames.begin(), corpus.frames.end(),
                     [](const TcpFrameSpec& a, const TcpFrameSpec& b) { return a.timestamp < b.timestamp; });
  }

  std::map<std::string, std::uint16_t> ports_;
  bool pending_own_host_ = false;
};

}  // namespace

context::TopicConfig default_topics() {
  context::TopicConfig t;
  t.stemmer = std::string(context::kStemmerVersion);
  // Keywords are stored in stemmed form.
  t.topics["navigation and travel"] = {"map", "inform", "track", "gp", "naving", "travel", "citi"};
  t.topics["weather and stars"] = {"weather", "forecast", "locat", "temperatur", "citi", "light"};
  t.topics["health"] = {"weight", "bodi", "exercis", "diet", "workout", "medic"};
  t.topics["games and cheat sheets"] = {"game", "level", "puzzl", "plai", "score", "cheat"};
  t.topics["music"] = {"music", "song", "playlist", "album", "artist", "radio"};
  t.topics["personalize"] = {"wallpap", "theme", "icon", "launcher", "custom"};
  for (const auto* c : city_names()) {
    std::string s(c);
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    t.city_names.insert(s);
  }
  std::set<std::string> words;
  for (const auto& topic : app_topics()) {
    for (const auto* w : topic.name_words) words.insert(w);
  }
  for (const auto* w : name_prefixes()) words.insert(w);
  for (const char* w : {"light", "weather", "map", "music", "photo", "camera", "news", "video", "chat", "book"})
    words.insert(w);
  t.name_wordlist.assign(words.begin(), words.end());
  t.stop_words = context::default_stop_words();
  return t;
}

SynthCorpus generate_corpus(const SynthConfig& config) {
  Generator g(config);
  g.run();
  return std::move(g.corpus);
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / CorpusFiles::capture, capture::write_pcap(corpus.frames));
  auto emit = [&](const char* name, auto&& fn) {
    std::ostringstream out;
    fn(out);
    write_file_atomic(dir / name, out.str());
  };
  emit(CorpusFiles::annotations, [&](std::ostream& o) { capture::write_flow_annotations(o, corpus.annotations); });
  emit(CorpusFiles::contexts, [&](std::ostream& o) { context::write_app_contexts(o, corpus.contexts); });
  emit(CorpusFiles::training_labels, [&](std::ostream& o) { pipeline::write_instance_labels(o, corpus.training_labels); });
  emit(CorpusFiles::true_intentions, [&](std::ostream& o) { pipeline::write_instance_labels(o, corpus.true_intentions); });
  emit(CorpusFiles::ground_truth, [&](std::ostream& o) { pipeline::write_flow_labels(o, corpus.ground_truth); });
  emit(CorpusFiles::device_ips, [&](std::ostream& o) {
    for (const auto& ip : corpus.device_ips) o << ip << '\n';
  });
  write_file_atomic(dir / CorpusFiles::topics, context::dump_topic_config(corpus.topics));
  write_file_atomic(dir / CorpusFiles::hostlist, corpus.hostlist_text);
}

}  // namespace locflow::synth
