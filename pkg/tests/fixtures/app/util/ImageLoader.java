package com.noteapp.util;

public class ImageLoader {
    public void loadAvatar(ImageView target, String url) {
        Bitmap cached = memoryCache.get(url);
        if (cached != null) {
            target.setImageBitmap(cached);
            return;
        }
        decodeAsync(url, target);
    }

    public void loadPhoto(ImageView target, File source) {
        Bitmap bitmap = decodeScaled(source, target.getWidth());
        target.setImageBitmap(bitmap);
    }

    private Bitmap decodeScaled(File source, int width) {
        Options options = boundsFor(source);
        options.inSampleSize = sampleSize(options, width);
        return BitmapFactory.decodeFile(source.getPath(), options);
    }

    public void bindAvatarView() {
        registerTarget(R.id.avatar_view);
    }
}
