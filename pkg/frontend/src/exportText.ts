// Downloads reuse the service's canonical `text` payload untouched, so an
// exported file is byte-identical to what the CLI writes for the query.

export interface Exportable {
  word: string;
  text: string;
}

export function exportText(result: Exportable): string {
  return result.text;
}

export function exportFileName(result: Exportable, task: string): string {
  const safe = result.word.replace(/[^\p{L}\p{N}\-_.]/gu, "_");
  return `${safe}.${task}.tsv`;
}

export function downloadResult(result: Exportable, task: string): void {
  const blob = new Blob([exportText(result)], {
    type: "text/tab-separated-values;charset=utf-8",
  });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = exportFileName(result, task);
  a.click();
  URL.revokeObjectURL(url);
}
