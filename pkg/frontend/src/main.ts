/** Entry point: boots the rating flow (or the admin view on #admin). */

import { SurveyApp, renderAdmin } from "./app.js";

function raterId(): string {
  const existing = window.localStorage.getItem("kg2t-rater-id");
  if (existing) return existing;
  const fresh = `rater-${Math.random().toString(36).slice(2, 10)}`;
  window.localStorage.setItem("kg2t-rater-id", fresh);
  return fresh;
}

const root = document.getElementById("app");
if (root) {
  const base = ""; // same origin as the survey service (served under /app/)
  if (window.location.hash === "#admin") {
    void renderAdmin(root, base);
  } else {
    void new SurveyApp(root, base, raterId()).start();
  }
}
