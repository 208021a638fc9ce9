package com.noteapp.data;

public class NoteStore {
    private final DatabaseHelper helper;

    public void insertNote(Note note) {
        ContentValues values = toValues(note);
        helper.getWritableDatabase().insert(NOTES_TABLE, null, values);
    }

    public List<Note> loadNotes() {
        Cursor cursor = helper.query(NOTES_TABLE, allColumns());
        return readRows(cursor);
    }

    public int rowCount() {
        return countRows(NOTES_TABLE);
    }

    public void deleteNote(long noteId) {
        helper.delete(NOTES_TABLE, noteId);
    }
}
