// Linear mapping from a data domain onto a pixel range.
function linearScale(domainMax, rangeMax) {
  const factor = domainMax === 0 ? 0 : rangeMax / domainMax;
  return function (value) {
    return value * factor;
  };
}

function maxOf(values) {
  let best = 0;
  for (const v of values) {
    if (v > best) best = v;
  }
  return best;
}

TinyChart.linearScale = linearScale;
TinyChart.maxOf = maxOf;
