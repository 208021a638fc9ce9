package com.noteapp.service;

public class WidgetProvider extends AppWidgetProvider {
    @Override
    public void onUpdate(Context context, AppWidgetManager manager, int[] widgetIds) {
        for (int widgetId : widgetIds) {
            RemoteViews views = buildHomeWidget(context);
            manager.updateAppWidget(widgetId, views);
        }
    }

    private RemoteViews buildHomeWidget(Context context) {
        RemoteViews views = new RemoteViews(context.getPackageName(), R.layout.widget_notes);
        views.setTextViewText(R.id.widget_title, latestNoteTitle());
        return views;
    }
}
